import { BackendMismatch, type BackendSession } from "./backend.js";
import { buildProgram, type PulseProgram } from "./program.js";
import { resultsFileSchema, type ResultsFile, type ScheduleFile } from "./schema.js";

export interface ShotOptions {
  shots: number;
  repeats: number;
  seed: number;
}

const DT_TOLERANCE = 1e-15; // seconds

/** Refuse to run against a backend whose drive line disagrees with the file. */
export function checkSession(schedule: ScheduleFile, session: BackendSession): void {
  if (Math.abs(session.dt - schedule.dt_s) > DT_TOLERANCE) {
    throw new BackendMismatch(
      `backend dt ${session.dt} s differs from schedule dt ${schedule.dt_s} s`,
    );
  }
}

/**
 * Execute a schedule on a backend session and package the counts as a
 * results file the analysis CLI can ingest.
 */
export async function replay(
  schedule: ScheduleFile,
  session: BackendSession,
  shots: ShotOptions,
  discriminate: boolean,
): Promise<{ program: PulseProgram; results: ResultsFile }> {
  checkSession(schedule, session);
  const program = buildProgram(schedule, {
    backend: session.name,
    qubit: session.qubit,
    shots: shots.shots,
    repeats: shots.repeats,
    discriminate,
  });
  const counts = await session.run(program, shots.seed);
  const perRepeat = counts.map((c) => c / shots.shots);
  const mean = perRepeat.reduce((a, b) => a + b, 0) / perRepeat.length;
  const meta = schedule.metadata as Record<string, unknown>;
  const detuning =
    typeof meta.detuning_rad_s === "number"
      ? meta.detuning_rad_s
      : session.qubitFrequency - schedule.frequency_rad_s;
  const label = typeof meta.family === "string" ? meta.family : String(meta.label ?? "");
  const results: ResultsFile = {
    format_version: 1,
    shot_config: { shots: shots.shots, repeats: shots.repeats, seed: shots.seed },
    provenance: {
      origin: "hardware",
      source: session.name,
      timestamp: new Date().toISOString().replace(/\.\d{3}Z$/, "+00:00"),
    },
    runs: [
      {
        duration_samples: schedule.n_samples,
        detuning_rad_s: detuning,
        per_repeat_p0: perRepeat,
        mean_p0: mean,
        label,
        origin: "hardware",
        seed: shots.seed,
      },
    ],
  };
  return { program, results: resultsFileSchema.parse(results) };
}
