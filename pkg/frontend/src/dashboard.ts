/** Dashboard rows: values come verbatim from the service JSON; the UI
 * never computes metric numbers itself. */

import type { Dashboard } from "./api.js";

export interface Row {
  label: string;
  value: string;
}

function fmt(value: unknown): string {
  if (value === null || value === undefined) return "NaN";
  if (typeof value === "number" && !Number.isInteger(value)) return value.toFixed(3);
  return String(value);
}

export function dashboardRows(dashboard: Dashboard): Row[] {
  return [
    { label: "Loop", value: fmt(dashboard.loop) },
    { label: "Strategy", value: fmt(dashboard.strategy) },
    { label: "Quota progress", value: `${dashboard.accepted} / ${dashboard.quota}` },
    { label: "Pending", value: fmt(dashboard.pending) },
    { label: "Administered", value: fmt(dashboard.administered) },
    { label: "Accept.rate (untouched)", value: fmt(dashboard.untouched_pct) },
    { label: "Accept.rate (modified)", value: fmt(dashboard.modified_pct) },
    { label: "Percentage of discarded pairs", value: fmt(dashboard.discarded_pct) },
    { label: "HTER so far", value: fmt(dashboard.hter_all) },
    { label: "Imbalance degree", value: fmt(dashboard.imbalance_degree) },
  ];
}

/** Flatten a LoopReport JSON object into labeled rows, verbatim values. */
export function reportRows(report: Record<string, unknown>, prefix = ""): Row[] {
  const rows: Row[] = [];
  for (const [key, value] of Object.entries(report)) {
    const label = prefix ? `${prefix}.${key}` : key;
    if (value !== null && typeof value === "object" && !Array.isArray(value)) {
      rows.push(...reportRows(value as Record<string, unknown>, label));
    } else {
      rows.push({ label, value: fmt(value) });
    }
  }
  return rows;
}
