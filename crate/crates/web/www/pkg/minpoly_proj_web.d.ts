/* tslint:disable */
/* eslint-disable */

/**
 * Worst-case failure probability for `b = 1..=bmax`:
 * `[{b, log10_failure, failure}]`.
 */
export function failure_curve(q: number, n: number, bmax: number): string;

/**
 * Exact probability for a spec in the JSON format accepted by the CLI:
 * `{fraction, decimal, n, q}`.
 */
export function pmp(spec_json: string, b: number, digits: number): string;

/**
 * The 5 x 4 grid of reference probabilities: `[{name, values: [..]}]`.
 */
export function table1(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly failure_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly pmp: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly table1: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
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
