export { BackendMismatch, JobFailure, MockBackend, connect } from "./backend.js";
export type { BackendSession } from "./backend.js";
export { ScheduleRejected, buildProgram } from "./program.js";
export type { Instruction, PulseProgram } from "./program.js";
export { checkSession, replay } from "./replay.js";
export {
  parseResultsFile,
  parseScheduleFile,
  resultsFileSchema,
  scheduleFileSchema,
} from "./schema.js";
export type { ResultsFile, ScheduleFile } from "./schema.js";
