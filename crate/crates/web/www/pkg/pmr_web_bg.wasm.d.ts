/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curves_free: (a: number, b: number) => void;
export const __wbg_readback_free: (a: number, b: number) => void;
export const __wbg_rvcmdemo_free: (a: number, b: number) => void;
export const curves_dibit: (a: number) => [number, number];
export const curves_step: (a: number) => [number, number];
export const curves_t: (a: number) => [number, number];
export const readback: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number];
export const readback_bits: (a: number) => [number, number];
export const readback_noiseless: (a: number) => [number, number];
export const readback_pad: (a: number) => number;
export const readback_samples: (a: number) => [number, number];
export const rvcm_demo: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number, number];
export const rvcmdemo_bp_bit_errors: (a: number) => number;
export const rvcmdemo_bp_codeword: (a: number) => number;
export const rvcmdemo_early_exit: (a: number) => number;
export const rvcmdemo_n: (a: number) => number;
export const rvcmdemo_rvcm_bit_errors: (a: number) => number;
export const rvcmdemo_rvcm_codeword: (a: number) => number;
export const rvcmdemo_trace: (a: number) => [number, number];
export const step_curves: (a: number, b: number, c: number, d: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
