/* tslint:disable */
/* eslint-disable */

/**
 * Classical tracing of an analytic body. Returns JSON with `sigma_cl`,
 * `R_cl`, `max_bounces`, and `fcl_sq_by_cos`: the histogram averaged over
 * azimuth, one value per `cos θ` bin from backward to forward.
 */
export function classical_scattering(body: string, grid: number): string;

/**
 * Low-frequency functionals of an analytic body meshed at `level` (≤ 4).
 */
export function lowfreq_functionals(body: string, level: number): string;

/**
 * Exact unit-sphere cross sections at `samples` log-spaced `ka` values.
 * Returns `[ka, σ/π, σ_T/π]` triples, flattened.
 */
export function sphere_sweep(ka_min: number, ka_max: number, samples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly classical_scattering: (a: number, b: number, c: number) => [number, number, number, number];
    readonly lowfreq_functionals: (a: number, b: number, c: number) => [number, number, number, number];
    readonly sphere_sweep: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
