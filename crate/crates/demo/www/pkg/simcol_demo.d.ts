/* tslint:disable */
/* eslint-disable */

/**
 * Builds `name` with parameters `a`, `b` and solves it exactly.
 *
 * Names: `bipartite-lb Δ`, `list-counter Δ`, `star-split k Δ`, `fks ℓ Δ`,
 * `projective q`.
 */
export function construct_and_solve(name: string, a: number, b: number): string;

/**
 * Exact `ν(k)` with its witness family, for `1 ≤ k ≤ 7`.
 */
export function nu_for(k: number): string;

/**
 * Runs the sparsification pipeline on a collection in JSON form.
 */
export function sparsify_collection(collection: string, eps: string, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly construct_and_solve: (a: number, b: number, c: number, d: number) => [number, number];
    readonly nu_for: (a: number) => [number, number];
    readonly sparsify_collection: (a: number, b: number, c: number, d: number, e: bigint) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
