/* tslint:disable */
/* eslint-disable */

/**
 * Ring edges, loads, capacities and average power of a radius-first plan.
 */
export function plan_summary(radius_m: number, t_c0: number, eta: number): string;

/**
 * Flattened `[d, continuous dBm, discrete dBm]` triples on `points` grid
 * positions up to the radius; empty when the plan is infeasible.
 */
export function power_curve(radius_m: number, t_c0: number, eta: number, points: number): Float64Array;

/**
 * Monte Carlo outage at one distance, next to the closed forms where they exist.
 */
export function simulate_point(radius_m: number, t_c0: number, eta: number, policy: string, distance_m: number, trials: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly plan_summary: (a: number, b: number, c: number) => [number, number];
    readonly power_curve: (a: number, b: number, c: number, d: number) => [number, number];
    readonly simulate_point: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
