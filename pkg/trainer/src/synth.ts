import * as fs from 'node:fs';
import * as path from 'node:path';
import { PNG } from 'pngjs';

import { CATEGORIES } from './categories.js';
import { mulberry32 } from './rng.js';

// One base tint per class so the head has a learnable signal.
const CLASS_TINTS: Record<string, [number, number, number]> = {
  cardboard: [181, 127, 57],
  glass: [64, 176, 166],
  metal: [140, 140, 150],
  paper: [235, 235, 225],
  plastic: [220, 60, 90],
  trash: [60, 60, 60],
};

/** Write a deterministic folder-per-class synthetic PNG dataset: tinted
 * noise plus a class-indexed stripe. Intended for smoke runs and tests,
 * not for training anything useful. */
export function writeSyntheticDataset(
  root: string,
  perClass: number,
  size: number,
  seed: number,
): string[] {
  const written: string[] = [];
  CATEGORIES.forEach((label, labelIndex) => {
    const dir = path.join(root, label);
    fs.mkdirSync(dir, { recursive: true });
    const rand = mulberry32(seed * 7919 + labelIndex);
    for (let n = 0; n < perClass; n++) {
      const png = new PNG({ width: size, height: size });
      const [r, g, b] = CLASS_TINTS[label];
      const stripe = Math.floor(((labelIndex + 1) / (CATEGORIES.length + 1)) * size);
      for (let y = 0; y < size; y++) {
        for (let x = 0; x < size; x++) {
          const i = (y * size + x) * 4;
          const noise = () => (rand() - 0.5) * 90;
          const onStripe = Math.abs(x - stripe) <= Math.max(1, size >> 5);
          png.data[i] = Math.max(0, Math.min(255, (onStripe ? 255 - r : r) + noise()));
          png.data[i + 1] = Math.max(0, Math.min(255, (onStripe ? 255 - g : g) + noise()));
          png.data[i + 2] = Math.max(0, Math.min(255, (onStripe ? 255 - b : b) + noise()));
          png.data[i + 3] = 255;
        }
      }
      const filePath = path.join(dir, `${label}_${String(n).padStart(3, '0')}.png`);
      fs.writeFileSync(filePath, PNG.sync.write(png));
      written.push(filePath);
    }
  });
  return written;
}
