/* tslint:disable */
/* eslint-disable */

export class Curves {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    dibit(): Float64Array;
    step(): Float64Array;
    t(): Float64Array;
}

export class Readback {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    bits(): Uint8Array;
    noiseless(): Float64Array;
    /**
     * Pad samples before the first data bit.
     */
    pad(): number;
    samples(): Float64Array;
}

export class RvcmDemo {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    bp_bit_errors(): number;
    bp_codeword(): boolean;
    early_exit(): boolean;
    n(): number;
    rvcm_bit_errors(): number;
    rvcm_codeword(): boolean;
    /**
     * Candidate list as CSV (`position,sign,is_codeword,metric,selected`).
     */
    trace(): string;
}

/**
 * Random bits written and read back through the recording channel.
 */
export function readback(n_bits: number, pw50: number, snr_db: number, media_fraction: number, jitter_max: number, seed: bigint): Readback;

/**
 * Decodes one seeded frame with BP and RVCM. `i_max` is a count or `n`.
 */
export function rvcm_demo(code: string, channel: string, snr_db: number, i_max: string, frame: bigint): RvcmDemo;

/**
 * Step response and dibit sampled on `[-half_width, half_width]`.
 */
export function step_curves(amplitude: number, pw50: number, half_width: number, points: number): Curves;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curves_free: (a: number, b: number) => void;
    readonly __wbg_readback_free: (a: number, b: number) => void;
    readonly __wbg_rvcmdemo_free: (a: number, b: number) => void;
    readonly curves_dibit: (a: number) => [number, number];
    readonly curves_step: (a: number) => [number, number];
    readonly curves_t: (a: number) => [number, number];
    readonly readback: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number];
    readonly readback_bits: (a: number) => [number, number];
    readonly readback_noiseless: (a: number) => [number, number];
    readonly readback_pad: (a: number) => number;
    readonly readback_samples: (a: number) => [number, number];
    readonly rvcm_demo: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number, number];
    readonly rvcmdemo_bp_bit_errors: (a: number) => number;
    readonly rvcmdemo_bp_codeword: (a: number) => number;
    readonly rvcmdemo_early_exit: (a: number) => number;
    readonly rvcmdemo_n: (a: number) => number;
    readonly rvcmdemo_rvcm_bit_errors: (a: number) => number;
    readonly rvcmdemo_rvcm_codeword: (a: number) => number;
    readonly rvcmdemo_trace: (a: number) => [number, number];
    readonly step_curves: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
