import * as fs from 'node:fs';
import * as path from 'node:path';
import { PNG } from 'pngjs';

import { CATEGORIES, Category } from './categories.js';
import { mulberry32, shuffleInPlace } from './rng.js';

export interface DatasetItem {
  /** Stable identifier: "<category>/<filename>". */
  id: string;
  filePath: string;
  label: Category;
  labelIndex: number;
}

export interface DatasetSplit {
  train: DatasetItem[];
  validation: DatasetItem[];
}

export class DatasetLayoutError extends Error {}

/** Scan a folder-per-class dataset root.
 *
 * The root must contain exactly the six canonical category directories
 * (extra or missing class folders are configuration errors, not silently
 * tolerated); plain files at the root are ignored. */
export function scanDataset(root: string): DatasetItem[] {
  const entries = fs.readdirSync(root, { withFileTypes: true });
  const dirs = entries.filter((e) => e.isDirectory()).map((e) => e.name).sort();
  const expected = [...CATEGORIES];
  if (JSON.stringify(dirs) !== JSON.stringify(expected)) {
    throw new DatasetLayoutError(
      `dataset root must contain exactly the class folders ${expected.join(', ')}; found: ${dirs.join(', ') || '(none)'}`,
    );
  }
  const items: DatasetItem[] = [];
  CATEGORIES.forEach((label, labelIndex) => {
    const dir = path.join(root, label);
    for (const name of fs.readdirSync(dir).sort()) {
      if (!name.toLowerCase().endsWith('.png')) continue;
      items.push({ id: `${label}/${name}`, filePath: path.join(dir, name), label, labelIndex });
    }
  });
  if (items.length === 0) {
    throw new DatasetLayoutError(`dataset root ${root} contains no .png images`);
  }
  return items;
}

/** Deterministic per-class split: the same seed always yields the same
 * validation membership. valFraction of each class (rounded) goes to
 * validation, so a balanced dataset stays balanced in both splits. */
export function splitDataset(items: DatasetItem[], valFraction: number, seed: number): DatasetSplit {
  if (!(valFraction > 0 && valFraction < 1)) {
    throw new RangeError(`valFraction must be in (0, 1), got ${valFraction}`);
  }
  const train: DatasetItem[] = [];
  const validation: DatasetItem[] = [];
  CATEGORIES.forEach((label, labelIndex) => {
    const classItems = items.filter((it) => it.label === label);
    classItems.sort((a, b) => (a.id < b.id ? -1 : a.id > b.id ? 1 : 0));
    shuffleInPlace(classItems, mulberry32(seed * 1000003 + labelIndex));
    const valCount = Math.round(classItems.length * valFraction);
    validation.push(...classItems.slice(0, valCount));
    train.push(...classItems.slice(valCount));
  });
  return { train, validation };
}

/** Decode a PNG into size x size RGB floats in [0, 1] (bilinear resample). */
export function loadImage(filePath: string, size: number): Float32Array {
  const png = PNG.sync.read(fs.readFileSync(filePath));
  const out = new Float32Array(size * size * 3);
  const sx = png.width / size;
  const sy = png.height / size;
  for (let y = 0; y < size; y++) {
    const fy = Math.min((y + 0.5) * sy - 0.5, png.height - 1);
    const y0 = Math.max(0, Math.floor(fy));
    const y1 = Math.min(png.height - 1, y0 + 1);
    const wy = fy - y0;
    for (let x = 0; x < size; x++) {
      const fx = Math.min((x + 0.5) * sx - 0.5, png.width - 1);
      const x0 = Math.max(0, Math.floor(fx));
      const x1 = Math.min(png.width - 1, x0 + 1);
      const wx = fx - x0;
      for (let c = 0; c < 3; c++) {
        const p00 = png.data[(y0 * png.width + x0) * 4 + c];
        const p01 = png.data[(y0 * png.width + x1) * 4 + c];
        const p10 = png.data[(y1 * png.width + x0) * 4 + c];
        const p11 = png.data[(y1 * png.width + x1) * 4 + c];
        const top = p00 + (p01 - p00) * wx;
        const bottom = p10 + (p11 - p10) * wx;
        out[(y * size + x) * 3 + c] = (top + (bottom - top) * wy) / 255;
      }
    }
  }
  return out;
}

/** Stack a list of items into one flat pixel buffer plus one-hot labels. */
export function loadBatch(items: DatasetItem[], size: number): {
  pixels: Float32Array;
  labels: Float32Array;
} {
  const pixels = new Float32Array(items.length * size * size * 3);
  const labels = new Float32Array(items.length * CATEGORIES.length);
  items.forEach((item, i) => {
    pixels.set(loadImage(item.filePath, size), i * size * size * 3);
    labels[i * CATEGORIES.length + item.labelIndex] = 1;
  });
  return { pixels, labels };
}
