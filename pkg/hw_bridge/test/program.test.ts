import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { ScheduleRejected, buildProgram } from "../src/program.js";
import { parseScheduleFile } from "../src/schema.js";

const FIXTURES = join(__dirname, "fixtures");

function loadSchedule(name: string) {
  return parseScheduleFile(readFileSync(join(FIXTURES, name), "utf-8"));
}

const OPTIONS = { backend: "mock", qubit: 0, shots: 1024, repeats: 30, discriminate: false };

describe("program construction", () => {
  it("matches the quadrature drive structure for the shortcut schedule", () => {
    const schedule = loadSchedule("shortcut320.json");
    const program = buildProgram(schedule, OPTIONS);
    const ops = program.instructions.map((inst) => inst.op);
    expect(ops).toEqual(["set_frequency", "shift_phase", "play", "measure"]);
    const [setFreq, shift, play, measure] = program.instructions;
    expect(setFreq).toEqual({
      op: "set_frequency",
      frequency_rad_s: schedule.frequency_rad_s,
    });
    expect(shift).toEqual({ op: "shift_phase", phase_rad: Math.PI / 2 });
    if (play.op !== "play") throw new Error("expected play");
    // amplitude sequence equal at serialized precision
    expect(JSON.stringify(play.amplitudes)).toBe(JSON.stringify(schedule.amplitudes));
    expect(measure).toEqual({ op: "measure", meas_level: 2 });
  });

  it("omits the phase shift for in-phase schedules", () => {
    const schedule = loadSchedule("linear320.json");
    const program = buildProgram(schedule, OPTIONS);
    expect(program.instructions.map((inst) => inst.op)).toEqual([
      "set_frequency",
      "play",
      "measure",
    ]);
  });

  it("restores the phase and inserts a Hadamard when discriminating", () => {
    const schedule = loadSchedule("shortcut320.json");
    const program = buildProgram(schedule, { ...OPTIONS, discriminate: true });
    const ops = program.instructions.map((inst) => inst.op);
    expect(ops).toEqual([
      "set_frequency",
      "shift_phase",
      "play",
      "shift_phase",
      "hadamard",
      "measure",
    ]);
    const second = program.instructions[3];
    expect(second).toEqual({ op: "shift_phase", phase_rad: -Math.PI / 2 });
    // measurement stays last
    expect(ops[ops.length - 1]).toBe("measure");
  });

  it("refuses schedules not marked hardware-bound", () => {
    const schedule = loadSchedule("shortcut320.json");
    const unbound = { ...schedule, hardware_bound: false };
    expect(() => buildProgram(unbound, OPTIONS)).toThrow(ScheduleRejected);
  });
});
