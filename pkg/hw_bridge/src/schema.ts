import { z } from "zod";

/** Schedule JSON as written by the synthesis CLI. */
export const scheduleFileSchema = z
  .object({
    format_version: z.number().int(),
    dt_s: z.number().positive(),
    frequency_rad_s: z.number(),
    phase_rad: z.number(),
    amplitudes: z.array(z.number().min(0).max(1)).min(1),
    n_samples: z.number().int().min(1),
    hardware_bound: z.boolean(),
    metadata: z.record(z.unknown()),
  })
  .superRefine((file, ctx) => {
    if (file.n_samples !== file.amplitudes.length) {
      ctx.addIssue({
        code: z.ZodIssueCode.custom,
        path: ["n_samples"],
        message: `n_samples = ${file.n_samples} but ${file.amplitudes.length} amplitudes`,
      });
    }
    if (file.hardware_bound && file.n_samples % 16 !== 0) {
      ctx.addIssue({
        code: z.ZodIssueCode.custom,
        path: ["n_samples"],
        message: `hardware-bound length ${file.n_samples} is not a multiple of 16`,
      });
    }
  });

export type ScheduleFile = z.infer<typeof scheduleFileSchema>;

const runSchema = z.object({
  duration_samples: z.number().int().min(1),
  detuning_rad_s: z.number(),
  per_repeat_p0: z.array(z.number().min(0).max(1)),
  mean_p0: z.number().min(0).max(1),
  label: z.string(),
  origin: z.enum(["simulated", "hardware"]),
  seed: z.number().int(),
});

/** Results JSON consumed by the analysis CLI's ingest command. */
export const resultsFileSchema = z
  .object({
    format_version: z.number().int(),
    shot_config: z.object({
      shots: z.number().int().min(1),
      repeats: z.number().int().min(1),
      seed: z.number().int(),
    }),
    provenance: z.object({
      origin: z.enum(["simulated", "hardware"]),
      source: z.string(),
      timestamp: z.string(),
    }),
    runs: z.array(runSchema),
  })
  .superRefine((file, ctx) => {
    const { shots, repeats } = file.shot_config;
    file.runs.forEach((run, i) => {
      if (run.per_repeat_p0.length !== repeats) {
        ctx.addIssue({
          code: z.ZodIssueCode.custom,
          path: ["runs", i, "per_repeat_p0"],
          message: `${run.per_repeat_p0.length} repeats recorded, shot_config declares ${repeats}`,
        });
      }
      for (const p of run.per_repeat_p0) {
        if (Math.abs(p * shots - Math.round(p * shots)) > 1e-9) {
          ctx.addIssue({
            code: z.ZodIssueCode.custom,
            path: ["runs", i, "per_repeat_p0"],
            message: `p0 = ${p} is not a multiple of 1/${shots}`,
          });
          break;
        }
      }
      const mean = run.per_repeat_p0.reduce((a, b) => a + b, 0) / run.per_repeat_p0.length;
      if (Math.abs(mean - run.mean_p0) > 1e-12) {
        ctx.addIssue({
          code: z.ZodIssueCode.custom,
          path: ["runs", i, "mean_p0"],
          message: `mean_p0 = ${run.mean_p0} but repeats average to ${mean}`,
        });
      }
    });
  });

export type ResultsFile = z.infer<typeof resultsFileSchema>;

export function parseScheduleFile(json: string): ScheduleFile {
  return scheduleFileSchema.parse(JSON.parse(json));
}

export function parseResultsFile(json: string): ResultsFile {
  return resultsFileSchema.parse(JSON.parse(json));
}
