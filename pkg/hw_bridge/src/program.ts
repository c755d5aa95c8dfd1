import type { ScheduleFile } from "./schema.js";

export type Instruction =
  | { op: "set_frequency"; frequency_rad_s: number }
  | { op: "shift_phase"; phase_rad: number }
  | { op: "play"; amplitudes: number[] }
  | { op: "hadamard" }
  | { op: "measure"; meas_level: number };

export interface PulseProgram {
  backend: string;
  qubit: number;
  dt_s: number;
  shots: number;
  repeats: number;
  discriminate: boolean;
  instructions: Instruction[];
}

export class ScheduleRejected extends Error {}

/**
 * Build the pulse program for one schedule file: set the carrier, shift
 * the phase when the schedule drives the quadrature axis, play the
 * amplitude list, optionally undo the shift and discriminate with a
 * Hadamard, then measure in the computational basis.
 */
export function buildProgram(
  schedule: ScheduleFile,
  options: {
    backend: string;
    qubit: number;
    shots: number;
    repeats: number;
    discriminate: boolean;
  },
): PulseProgram {
  if (!schedule.hardware_bound) {
    throw new ScheduleRejected(
      "schedule is not marked hardware-bound; refusing to build a program",
    );
  }
  if (schedule.n_samples % 16 !== 0) {
    throw new ScheduleRejected(
      `schedule length ${schedule.n_samples} is not a multiple of 16`,
    );
  }
  const instructions: Instruction[] = [
    { op: "set_frequency", frequency_rad_s: schedule.frequency_rad_s },
  ];
  if (schedule.phase_rad !== 0) {
    instructions.push({ op: "shift_phase", phase_rad: schedule.phase_rad });
  }
  instructions.push({ op: "play", amplitudes: [...schedule.amplitudes] });
  if (options.discriminate) {
    if (schedule.phase_rad !== 0) {
      instructions.push({ op: "shift_phase", phase_rad: -schedule.phase_rad });
    }
    instructions.push({ op: "hadamard" });
  }
  instructions.push({ op: "measure", meas_level: 2 });
  return {
    backend: options.backend,
    qubit: options.qubit,
    dt_s: schedule.dt_s,
    shots: options.shots,
    repeats: options.repeats,
    discriminate: options.discriminate,
    instructions,
  };
}
