import { parseArgs } from 'node:util';

import { DatasetLayoutError } from './dataset.js';
import { BackboneUnavailableError } from './model.js';
import { writeSyntheticDataset } from './synth.js';
import { DEFAULT_TRAINER_CONFIG, trainAndExport } from './train.js';

const USAGE = `usage:
  train --data <dir> --out <dir> [--epochs 30] [--batch 32] [--seed 1]
        [--image-size 128] [--val-fraction 0.2] [--dropout 0.3]
        [--dense-units 128] [--backbone pretrained|scratch|<model url>]
      Train the classifier on a folder-per-class PNG dataset and write
      history.csv, predictions.csv (validation split), model/, run.json.

  synth --out <dir> [--per-class 10] [--size 128] [--seed 1]
      Generate a deterministic synthetic dataset for smoke runs.
`;

function numberFlag(value: string | undefined, fallback: number): number {
  if (value === undefined) return fallback;
  const parsed = Number(value);
  if (!Number.isFinite(parsed)) throw new RangeError(`expected a number, got ${value}`);
  return parsed;
}

async function runTrain(argv: string[]): Promise<number> {
  const { values } = parseArgs({
    args: argv,
    options: {
      data: { type: 'string' },
      out: { type: 'string' },
      epochs: { type: 'string' },
      batch: { type: 'string' },
      seed: { type: 'string' },
      'image-size': { type: 'string' },
      'val-fraction': { type: 'string' },
      dropout: { type: 'string' },
      'dense-units': { type: 'string' },
      backbone: { type: 'string' },
    },
  });
  if (!values.data || !values.out) {
    console.error('train: --data and --out are required\n' + USAGE);
    return 1;
  }
  const result = await trainAndExport({
    dataRoot: values.data,
    outDir: values.out,
    epochs: numberFlag(values.epochs, DEFAULT_TRAINER_CONFIG.epochs),
    batchSize: numberFlag(values.batch, DEFAULT_TRAINER_CONFIG.batchSize),
    seed: numberFlag(values.seed, DEFAULT_TRAINER_CONFIG.seed),
    imageSize: numberFlag(values['image-size'], DEFAULT_TRAINER_CONFIG.imageSize),
    valFraction: numberFlag(values['val-fraction'], DEFAULT_TRAINER_CONFIG.valFraction),
    dropout: numberFlag(values.dropout, DEFAULT_TRAINER_CONFIG.dropout),
    denseUnits: numberFlag(values['dense-units'], DEFAULT_TRAINER_CONFIG.denseUnits),
    backbone: values.backbone ?? DEFAULT_TRAINER_CONFIG.backbone,
  });
  console.log(`history:     ${result.historyPath}`);
  console.log(`predictions: ${result.predictionsPath}`);
  console.log(`model:       ${result.modelDir}`);
  console.log(`metadata:    ${result.runMetadataPath}`);
  console.log(
    `final accuracy: train ${result.finalTrainAccuracy.toFixed(2)}% / ` +
      `validation ${result.finalValAccuracy.toFixed(2)}%`,
  );
  return 0;
}

function runSynth(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      out: { type: 'string' },
      'per-class': { type: 'string' },
      size: { type: 'string' },
      seed: { type: 'string' },
    },
  });
  if (!values.out) {
    console.error('synth: --out is required\n' + USAGE);
    return 1;
  }
  const files = writeSyntheticDataset(
    values.out,
    numberFlag(values['per-class'], 10),
    numberFlag(values.size, 128),
    numberFlag(values.seed, 1),
  );
  console.log(`wrote ${files.length} images under ${values.out}`);
  return 0;
}

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  try {
    if (command === 'train') return await runTrain(rest);
    if (command === 'synth') return runSynth(rest);
    console.error(USAGE);
    return 1;
  } catch (err) {
    if (err instanceof DatasetLayoutError || err instanceof RangeError) {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    if (err instanceof BackboneUnavailableError) {
      console.error(`environment error: ${err.message}`);
      return 3;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split('/').pop()!);
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
