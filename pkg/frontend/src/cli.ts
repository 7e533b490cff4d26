#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { FigureKind, renderToFile } from "./charts";
import { InputError } from "./csv";

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .command(
      "render",
      "render a figure from a qubed CSV file",
      (cmd) =>
        cmd
          .option("kind", {
            choices: ["risk", "scan"] as const,
            demandOption: true,
            describe: "risk: log-scale risk curves; scan: utility vs time",
          })
          .option("in", {
            type: "string",
            demandOption: true,
            describe: "input CSV path",
          })
          .option("out", {
            type: "string",
            demandOption: true,
            describe: "output SVG path",
          })
          .option("nyquist-spacing", {
            type: "number",
            default: Math.PI,
            describe: "vertical-gridline spacing for --kind scan",
          }),
      (args) => {
        try {
          renderToFile({
            inputCsv: args.in,
            figureKind: args.kind as FigureKind,
            outputImage: args.out,
            nyquistSpacing: args["nyquist-spacing"],
          });
        } catch (err) {
          if (err instanceof InputError) {
            console.error(`error: ${err.message}`);
            process.exit(1);
          }
          throw err;
        }
      },
    )
    .demandCommand(1, "specify a command, e.g. render")
    .strict()
    .fail((msg, err) => {
      if (err instanceof InputError) {
        console.error(`error: ${err.message}`);
      } else if (err) {
        throw err;
      } else {
        console.error(`error: ${msg}`);
      }
      process.exit(1);
    })
    .parseAsync();
}

main();
