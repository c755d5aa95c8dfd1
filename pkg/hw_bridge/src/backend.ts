import type { PulseProgram } from "./program.js";

/** A pulse backend as seen by the bridge: calibration values plus execution. */
export interface BackendSession {
  name: string;
  qubit: number;
  /** Calibrated qubit frequency read from the backend, rad/s. */
  qubitFrequency: number;
  /** Amplitude-update granularity of the drive line, seconds. */
  dt: number;
  /** Run the program; returns ground-state counts per repeat. */
  run(program: PulseProgram, seed: number): Promise<number[]>;
}

export class BackendMismatch extends Error {}
export class JobFailure extends Error {}

const REFERENCE_DT = 0.22222222222222221e-9;
const REFERENCE_QUBIT_FREQ = 2 * Math.PI * 4.925035720219493e9;

/** Deterministic 32-bit generator for the mock backend. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) | 0;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/**
 * Stand-in backend for offline contract tests: reports the reference
 * calibration and draws shot counts from a fixed ground-state
 * probability.  No physics, just deterministic plumbing.
 */
export class MockBackend implements BackendSession {
  name = "mock";
  qubit: number;
  qubitFrequency = REFERENCE_QUBIT_FREQ;
  dt = REFERENCE_DT;
  private p0: number;

  constructor(qubit = 0, groundProbability = 1.0) {
    if (groundProbability < 0 || groundProbability > 1) {
      throw new JobFailure(`mock ground probability ${groundProbability} outside [0, 1]`);
    }
    this.qubit = qubit;
    this.p0 = groundProbability;
  }

  async run(program: PulseProgram, seed: number): Promise<number[]> {
    const rand = mulberry32(seed);
    const counts: number[] = [];
    for (let r = 0; r < program.repeats; r++) {
      let zeros = 0;
      for (let s = 0; s < program.shots; s++) {
        if (rand() < this.p0) zeros += 1;
      }
      counts.push(zeros);
    }
    return counts;
  }
}

export function connect(name: string, qubit: number, mockP0: number): BackendSession {
  if (name === "mock") {
    return new MockBackend(qubit, mockP0);
  }
  // Live submission needs the vendor SDK and credentials; out of scope here.
  throw new JobFailure(
    `no driver for backend '${name}'; only the offline 'mock' backend is available`,
  );
}
