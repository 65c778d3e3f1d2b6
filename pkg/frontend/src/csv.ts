import Papa from "papaparse";

/** One parsed CSV row keyed by header name; numeric cells pre-converted. */
export type Row = Record<string, string | number>;

export class SchemaMismatch extends Error {
  readonly missing: string[];

  constructor(message: string, missing: string[] = []) {
    super(message);
    this.name = "SchemaMismatch";
    this.missing = missing;
  }
}

/** Columns each figure kind needs from its sweep CSV. */
export const REQUIRED_COLUMNS: Record<string, string[]> = {
  se_users: ["k", "method", "se_mean"],
  ber_users: ["k", "method", "ber_mean"],
  ber_snr: ["snr_db", "method", "ber"],
};

export function parseCsv(text: string, kind: string): Row[] {
  const required = REQUIRED_COLUMNS[kind];
  if (!required) {
    throw new SchemaMismatch(`unknown figure kind: ${kind}`);
  }
  const parsed = Papa.parse<Row>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaMismatch(`CSV parse error: ${first.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = required.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new SchemaMismatch(
      `CSV is missing required columns for ${kind}: ${missing.join(", ")}`,
      missing,
    );
  }
  if (parsed.data.length === 0) {
    throw new SchemaMismatch("CSV contains a header but no data rows");
  }
  return parsed.data;
}
