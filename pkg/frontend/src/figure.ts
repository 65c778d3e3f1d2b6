import * as echarts from "echarts";
import { parseCsv, Row, SchemaMismatch } from "./csv";

type EChartsOption = echarts.EChartsOption;
type SeriesOption = echarts.SeriesOption;

export type FigureKind = "se_users" | "ber_users" | "ber_snr";

export interface FigureSpec {
  inputCsv: string; // raw CSV text
  kind: FigureKind;
  title?: string;
  width?: number;
  height?: number;
}

interface AxisInfo {
  x: string;
  y: string;
  xLabel: string;
  yLabel: string;
  logY: boolean;
}

const AXES: Record<FigureKind, AxisInfo> = {
  se_users: {
    x: "k",
    y: "se_mean",
    xLabel: "number of users K",
    yLabel: "spectral efficiency (bits/s/Hz)",
    logY: false,
  },
  ber_users: {
    x: "k",
    y: "ber_mean",
    xLabel: "number of users K",
    yLabel: "bit error rate",
    logY: true,
  },
  ber_snr: {
    x: "snr_db",
    y: "ber",
    xLabel: "SNR (dB)",
    yLabel: "bit error rate",
    logY: true,
  },
};

export interface MethodSeries {
  method: string;
  points: [number, number][];
}

/**
 * Group rows into one line per method. Points are copied verbatim from
 * the CSV (no smoothing or interpolation); on a log axis, nonpositive
 * values cannot be drawn and are dropped.
 */
export function buildSeries(rows: Row[], kind: FigureKind): MethodSeries[] {
  const axes = AXES[kind];
  const byMethod = new Map<string, [number, number][]>();
  for (const row of rows) {
    const method = String(row["method"]);
    const x = Number(row[axes.x]);
    const y = Number(row[axes.y]);
    if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
    if (axes.logY && y <= 0) continue;
    if (!byMethod.has(method)) byMethod.set(method, []);
    byMethod.get(method)!.push([x, y]);
  }
  if (byMethod.size === 0) {
    throw new SchemaMismatch("no plottable rows after filtering");
  }
  return [...byMethod.entries()]
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([method, points]) => ({
      method,
      points: points.sort((p, q) => p[0] - q[0]),
    }));
}

export function buildOption(spec: FigureSpec): EChartsOption {
  const rows = parseCsv(spec.inputCsv, spec.kind);
  const axes = AXES[spec.kind];
  const series: SeriesOption[] = buildSeries(rows, spec.kind).map((s) => ({
    type: "line",
    name: s.method,
    data: s.points,
    symbolSize: 7,
  }));
  return {
    animation: false,
    title: spec.title ? { text: spec.title, left: "center" } : undefined,
    legend: { bottom: 0 },
    grid: { left: 70, right: 30, top: 40, bottom: 60 },
    xAxis: { type: "value", name: axes.xLabel, nameLocation: "middle", nameGap: 28 },
    yAxis: {
      type: axes.logY ? "log" : "value",
      name: axes.yLabel,
      nameLocation: "middle",
      nameGap: 50,
    },
    series,
  };
}

/**
 * The SVG embeds zrender's process-global instance and class counters
 * (zr3-cls-17, zr3-c0, ...); renumber them by first appearance so the
 * same input always yields the same bytes.
 */
export function canonicalizeSvg(svg: string): string {
  const renumber = (text: string, family: RegExp, prefix: string) => {
    const seen = new Map<string, number>();
    return text.replace(family, (token) => {
      if (!seen.has(token)) seen.set(token, seen.size);
      return `${prefix}${seen.get(token)}`;
    });
  };
  return renumber(
    renumber(svg, /zr\d+-cls-\d+/g, "zr-cls-"),
    /zr\d+-c\d+/g,
    "zr-c",
  );
}

export function renderSvg(spec: FigureSpec): string {
  const option = buildOption(spec);
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: spec.width ?? 800,
    height: spec.height ?? 540,
  });
  try {
    chart.setOption(option);
    return canonicalizeSvg(chart.renderToSVGString());
  } finally {
    chart.dispose();
  }
}
