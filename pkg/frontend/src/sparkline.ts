/** Tiny inline SVG sparkline; pure string output so snapshots are stable. */

export function sparkline(
  values: readonly number[],
  options: { width?: number; height?: number; min?: number; max?: number } = {},
): string {
  const width = options.width ?? 120;
  const height = options.height ?? 28;
  if (values.length === 0) {
    return `<svg class="spark" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}"></svg>`;
  }
  const lo = options.min ?? Math.min(...values);
  const hi = options.max ?? Math.max(...values);
  const span = hi - lo || 1;
  const pad = 2;
  const step = values.length > 1 ? (width - 2 * pad) / (values.length - 1) : 0;
  const points = values
    .map((value, i) => {
      const x = pad + i * step;
      const y = height - pad - ((value - lo) / span) * (height - 2 * pad);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
  return (
    `<svg class="spark" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}">` +
    `<polyline fill="none" points="${points}"></polyline></svg>`
  );
}
