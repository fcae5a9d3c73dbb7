/* tslint:disable */
/* eslint-disable */

/**
 * Critical amplitude of a Faraday layer over a wavenumber range. A
 * nonpositive `depth` means infinite depth.
 */
export function faraday_sweep(rho: number, nu: number, tension: number, g0: number, depth: number, a: number, omega0: number, alpha_min: number, alpha_max: number, steps: number): string;

/**
 * Least stable pair of the cart–pendulum and `Re(λ₀ + ε²λ₂)` for `ε` in
 * `[0, eps_max]`.
 */
export function pendulum_margin(m_s: number, m_p: number, ell: number, k_s: number, gamma_s: number, gamma_p: number, a: number, omega0: number, eps_max: number, points: number): string;

/**
 * `S(ω)` on `points` samples of `[0, omega_max]`, the poles of `G` and the
 * integral of `S`.
 */
export function psd_curve(a: number, omega0: number, omega_max: number, points: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly faraday_sweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
    readonly pendulum_margin: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
    readonly psd_curve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
