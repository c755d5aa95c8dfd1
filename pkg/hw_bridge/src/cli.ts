#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";

import { BackendMismatch, JobFailure, connect } from "./backend.js";
import { buildProgram, ScheduleRejected } from "./program.js";
import { replay } from "./replay.js";
import { parseScheduleFile } from "./schema.js";

const USAGE = `usage: hw-bridge --schedule FILE [options]

Replay a schedule file on a pulse backend and emit a results file.

options:
  --schedule FILE     schedule JSON written by the synthesis CLI (required)
  --backend NAME      backend to run on (default: mock)
  --qubit N           qubit index (default: 0)
  --shots N           shots per repeat (default: 1024)
  --repeats N         repeats (default: 30)
  --seed N            seed for the mock backend (default: 0)
  --discriminate      shift the phase back and apply a Hadamard before measuring
  --mock-p0 P         ground-state probability of the mock backend (default: 1.0)
  --dry-run           print the validated program and exit without running
  --out FILE          write the results JSON here (default: stdout)
`;

interface Args {
  schedule?: string;
  backend: string;
  qubit: number;
  shots: number;
  repeats: number;
  seed: number;
  discriminate: boolean;
  mockP0: number;
  dryRun: boolean;
  out?: string;
}

function parseArgs(argv: string[]): Args {
  const args: Args = {
    backend: "mock",
    qubit: 0,
    shots: 1024,
    repeats: 30,
    seed: 0,
    discriminate: false,
    mockP0: 1.0,
    dryRun: false,
  };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`missing value for ${flag}`);
      return argv[i];
    };
    switch (flag) {
      case "--schedule":
        args.schedule = next();
        break;
      case "--backend":
        args.backend = next();
        break;
      case "--qubit":
        args.qubit = Number(next());
        break;
      case "--shots":
        args.shots = Number(next());
        break;
      case "--repeats":
        args.repeats = Number(next());
        break;
      case "--seed":
        args.seed = Number(next());
        break;
      case "--mock-p0":
        args.mockP0 = Number(next());
        break;
      case "--discriminate":
        args.discriminate = true;
        break;
      case "--dry-run":
        args.dryRun = true;
        break;
      case "--out":
        args.out = next();
        break;
      case "--help":
      case "-h":
        process.stdout.write(USAGE);
        process.exit(0);
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (!args.schedule) throw new Error("--schedule is required");
  return args;
}

export async function run(argv: string[]): Promise<number> {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n${USAGE}`);
    return 2;
  }
  try {
    const schedule = parseScheduleFile(readFileSync(args.schedule!, "utf-8"));
    if (args.dryRun) {
      const program = buildProgram(schedule, {
        backend: args.backend,
        qubit: args.qubit,
        shots: args.shots,
        repeats: args.repeats,
        discriminate: args.discriminate,
      });
      process.stdout.write(JSON.stringify(program, null, 2) + "\n");
      return 0;
    }
    const session = connect(args.backend, args.qubit, args.mockP0);
    const { results } = await replay(
      schedule,
      session,
      { shots: args.shots, repeats: args.repeats, seed: args.seed },
      args.discriminate,
    );
    const payload = JSON.stringify(results, null, 2) + "\n";
    if (args.out) {
      writeFileSync(args.out, payload);
      process.stderr.write(`wrote ${args.out}\n`);
    } else {
      process.stdout.write(payload);
    }
    return 0;
  } catch (err) {
    if (err instanceof ScheduleRejected || err instanceof BackendMismatch) {
      process.stderr.write(`refused: ${(err as Error).message}\n`);
      return 2;
    }
    if (err instanceof JobFailure) {
      process.stderr.write(`job failure: ${(err as Error).message}\n`);
      return 1;
    }
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  run(process.argv.slice(2)).then((code) => process.exit(code));
}
