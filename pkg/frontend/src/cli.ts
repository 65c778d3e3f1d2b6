#!/usr/bin/env node
import { readFileSync, writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { SchemaMismatch } from "./csv";
import { FigureKind, renderSvg } from "./figure";

const argv = yargs(hideBin(process.argv))
  .usage("Render a result figure from a cxprecode sweep CSV")
  .option("input", {
    type: "string",
    demandOption: true,
    describe: "sweep CSV (users_sweep.csv or snr_sweep.csv)",
  })
  .option("kind", {
    choices: ["se_users", "ber_users", "ber_snr"] as const,
    demandOption: true,
    describe: "figure to draw; ber_* use a logarithmic y-axis",
  })
  .option("out", {
    type: "string",
    demandOption: true,
    describe: "output SVG path",
  })
  .option("title", { type: "string" })
  .option("width", { type: "number", default: 800 })
  .option("height", { type: "number", default: 540 })
  .strict()
  .parseSync();

try {
  const svg = renderSvg({
    inputCsv: readFileSync(argv.input, "utf8"),
    kind: argv.kind as FigureKind,
    title: argv.title,
    width: argv.width,
    height: argv.height,
  });
  writeFileSync(argv.out, svg);
  console.log(`wrote ${argv.out}`);
} catch (err) {
  if (err instanceof SchemaMismatch) {
    console.error(`schema error: ${err.message}`);
    process.exit(2);
  }
  throw err;
}
