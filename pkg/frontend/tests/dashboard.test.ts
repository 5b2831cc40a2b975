import { describe, expect, it } from "vitest";

import type { Dashboard } from "../src/api.js";
import { dashboardRows, reportRows } from "../src/dashboard.js";

const dashboard: Dashboard = {
  loop: "V2",
  open: true,
  strategy: "LAB",
  quota: 500,
  accepted: 123,
  pending: 7,
  administered: 300,
  untouched: 30,
  modified: 93,
  discarded: 177,
  untouched_pct: 10.25,
  modified_pct: 31.0,
  discarded_pct: 58.75,
  hter_all: 0.312345,
  imbalance_degree: null,
};

describe("dashboard rows", () => {
  it("renders service values verbatim, null as NaN", () => {
    const rows = dashboardRows(dashboard);
    const byLabel = Object.fromEntries(rows.map((r) => [r.label, r.value]));
    expect(byLabel["Quota progress"]).toBe("123 / 500");
    expect(byLabel["HTER so far"]).toBe("0.312");
    expect(byLabel["Imbalance degree"]).toBe("NaN");
    expect(byLabel["Accept.rate (untouched)"]).toBe("10.250");
  });
});

describe("report rows", () => {
  it("flattens the report JSON without recomputing anything", () => {
    // golden fixture shaped like the report endpoint's JSON
    const report = {
      version: "V5",
      acceptance: {
        untouched_pct: 10.936,
        modified_pct: 50.061,
        discarded_pct: 39.003,
        untouched_macro_avg: null,
      },
      units: { cn: { hter_all: { micro: 0.312 } } },
    };
    const rows = reportRows(report);
    const byLabel = Object.fromEntries(rows.map((r) => [r.label, r.value]));
    expect(byLabel["acceptance.untouched_pct"]).toBe("10.936");
    expect(byLabel["acceptance.modified_pct"]).toBe("50.061");
    expect(byLabel["acceptance.untouched_macro_avg"]).toBe("NaN");
    expect(byLabel["units.cn.hter_all.micro"]).toBe("0.312");
    expect(byLabel["version"]).toBe("V5");
  });
});
