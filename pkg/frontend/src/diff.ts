/** Character-level diff for post-edit highlighting. */

export type DiffOp = "equal" | "insert" | "delete";

export interface DiffSegment {
  op: DiffOp;
  text: string;
}

/**
 * LCS-based character diff from `before` to `after`.
 * Adjacent segments of the same kind are merged; "insert" text belongs to
 * `after`, "delete" text to `before`.
 */
export function charDiff(before: string, after: string): DiffSegment[] {
  const n = before.length;
  const m = after.length;
  // LCS length table
  const table: Int32Array[] = [];
  for (let i = 0; i <= n; i++) table.push(new Int32Array(m + 1));
  for (let i = 1; i <= n; i++) {
    const row = table[i]!;
    const prev = table[i - 1]!;
    for (let j = 1; j <= m; j++) {
      row[j] =
        before[i - 1] === after[j - 1]
          ? prev[j - 1]! + 1
          : Math.max(prev[j]!, row[j - 1]!);
    }
  }
  const segments: DiffSegment[] = [];
  const push = (op: DiffOp, text: string) => {
    if (!text) return;
    const last = segments[segments.length - 1];
    if (last && last.op === op) last.text += text;
    else segments.push({ op, text });
  };
  // backtrace collecting segments in reverse
  const reversed: DiffSegment[] = [];
  let i = n;
  let j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && before[i - 1] === after[j - 1]) {
      reversed.push({ op: "equal", text: before[i - 1]! });
      i--;
      j--;
    } else if (j > 0 && (i === 0 || table[i]![j - 1]! >= table[i - 1]![j]!)) {
      reversed.push({ op: "insert", text: after[j - 1]! });
      j--;
    } else {
      reversed.push({ op: "delete", text: before[i - 1]! });
      i--;
    }
  }
  for (let k = reversed.length - 1; k >= 0; k--) {
    const seg = reversed[k]!;
    push(seg.op, seg.text);
  }
  return segments;
}

/** Reconstruction helpers; both must be inverses of charDiff. */
export function diffBefore(segments: DiffSegment[]): string {
  return segments
    .filter((s) => s.op !== "insert")
    .map((s) => s.text)
    .join("");
}

export function diffAfter(segments: DiffSegment[]): string {
  return segments
    .filter((s) => s.op !== "delete")
    .map((s) => s.text)
    .join("");
}
