//! k-dimensional rotation-and-scaling operators and the scoring function.
//!
//! A rotor row is a parameter vector `v ∈ ℝᵏ`. It acts on `x ∈ ℝᵏ` as
//! `‖v‖ · R(x)`, where `R` is the rotation in the plane spanned by `e₁`
//! and `v̂` that carries `e₁` onto `v̂` and is the identity on the
//! orthogonal complement. At `k = 2` this is exactly complex
//! multiplication of `x₁ + i·x₂` by `v₁ + i·v₂`.
//!
//! Embedding matrices are stored row-major as flat `&[f64]` slices of
//! length `n·k`; a quadruple is scored by applying the relation/time
//! rotor rows and then the static rotor rows to the head matrix, and
//! taking the trace inner product `⟨A, B⟩ = tr(ABᵀ)` with the tail.

use ndarray::ArrayView2;

/// Relative threshold below which `v` is treated as lying on the `±e₁`
/// axis and the rotation plane is degenerate.
pub const AXIS_EPS: f64 = 1e-9;

/// Euclidean norm of a rotor row; this is the scaling factor of the
/// transform.
pub fn rotor_scale(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Apply the rotor defined by `v` to `x`, writing into `out`.
///
/// `k = 2` takes the exact complex-multiplication path; higher `k` uses
/// the plane-rotation construction of [`apply_rotor_general`]. `v = 0`
/// yields the zero vector (scale 0, rotation taken as identity).
pub fn apply_rotor(v: &[f64], x: &[f64], out: &mut [f64]) {
    debug_assert_eq!(v.len(), x.len());
    debug_assert_eq!(v.len(), out.len());
    if v.len() == 2 {
        let (re, im) = complex_mul(v[0], v[1], x[0], x[1]);
        out[0] = re;
        out[1] = im;
    } else {
        apply_rotor_general(v, x, out);
    }
}

/// The general e₁→v̂ construction, valid for any `k ≥ 2`.
///
/// Writes `‖v‖ · R(x)` into `out` where `R` rotates `e₁` onto `v̂`
/// within their common plane. When `v̂` is within [`AXIS_EPS`] of `±e₁`
/// the plane is degenerate and the limit `v₁·x` is used instead.
pub fn apply_rotor_general(v: &[f64], x: &[f64], out: &mut [f64]) {
    let k = v.len();
    assert!(k >= 2, "rotor dimension must be at least 2, got {k}");
    assert_eq!(k, x.len(), "rotor/vector dimension mismatch");
    assert_eq!(k, out.len(), "rotor/output dimension mismatch");

    let scale = rotor_scale(v);
    if scale == 0.0 {
        out.fill(0.0);
        return;
    }
    // d = ‖v⊥‖², p = ⟨v⊥, x⊥⟩ over the components orthogonal to e₁.
    let d: f64 = v[1..].iter().map(|a| a * a).sum();
    let p: f64 = v[1..].iter().zip(&x[1..]).map(|(a, b)| a * b).sum();

    if d.sqrt() <= AXIS_EPS * scale {
        // v on the ±e₁ axis: ±‖v‖ · identity, i.e. v₁ · x.
        for (o, xi) in out.iter_mut().zip(x) {
            *o = v[0] * xi;
        }
        return;
    }

    // f₁ = v₁x₁ − p, f_j = s·x_j + β·v_j with β = x₁ + (v₁ − s)·p/d.
    let beta = x[0] + (v[0] - scale) * p / d;
    out[0] = v[0] * x[0] - p;
    for j in 1..k {
        out[j] = scale * x[j] + beta * v[j];
    }
}

/// Apply the transpose of the rotor matrix `M(v)` to `g`.
///
/// `M(v)ᵀ` is the rotor of the "conjugate" row `(v₁, −v⊥)`; this is the
/// pullback of a gradient through `x ↦ apply_rotor(v, x)`.
pub fn apply_rotor_transpose(v: &[f64], g: &[f64], out: &mut [f64]) {
    let k = v.len();
    debug_assert_eq!(k, g.len());
    debug_assert_eq!(k, out.len());

    if k == 2 {
        // conj(v) · g
        let (re, im) = complex_mul(v[0], -v[1], g[0], g[1]);
        out[0] = re;
        out[1] = im;
        return;
    }

    let scale = rotor_scale(v);
    if scale == 0.0 {
        out.fill(0.0);
        return;
    }
    let d: f64 = v[1..].iter().map(|a| a * a).sum();
    if d.sqrt() <= AXIS_EPS * scale {
        for (o, gi) in out.iter_mut().zip(g) {
            *o = v[0] * gi;
        }
        return;
    }
    // (Mᵀg)₁ = v₁g₁ + ⟨v⊥, g⊥⟩; (Mᵀg)_m = −v_m·g₁ + s·g_m + (v₁−s)/d·v_m·⟨v⊥,g⊥⟩
    let b: f64 = v[1..].iter().zip(&g[1..]).map(|(a, c)| a * c).sum();
    out[0] = v[0] * g[0] + b;
    let coef = (v[0] - scale) / d * b;
    for m in 1..k {
        out[m] = -v[m] * g[0] + scale * g[m] + coef * v[m];
    }
}

/// Accumulate into `gv` the gradient of `⟨g, apply_rotor(v, x)⟩` with
/// respect to `v`.
///
/// On the degenerate `±e₁` axis the branch gradient of the limit map
/// `v ↦ v₁·x` is used.
pub fn rotor_grad_v(v: &[f64], x: &[f64], g: &[f64], gv: &mut [f64]) {
    let k = v.len();
    debug_assert_eq!(k, x.len());
    debug_assert_eq!(k, g.len());
    debug_assert_eq!(k, gv.len());

    if k == 2 {
        // f = v·x (complex); ∂⟨g,f⟩/∂v = (g₁x₁ + g₂x₂, g₂x₁ − g₁x₂).
        gv[0] += g[0] * x[0] + g[1] * x[1];
        gv[1] += g[1] * x[0] - g[0] * x[1];
        return;
    }

    let scale = rotor_scale(v);
    if scale == 0.0 {
        // Subgradient 0 at the fully degenerate point.
        return;
    }
    let d: f64 = v[1..].iter().map(|a| a * a).sum();
    if d.sqrt() <= AXIS_EPS * scale {
        gv[0] += g.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        return;
    }

    let p: f64 = v[1..].iter().zip(&x[1..]).map(|(a, b)| a * b).sum();
    let a_dot: f64 = g[1..].iter().zip(&x[1..]).map(|(a, b)| a * b).sum();
    let b_dot: f64 = g[1..].iter().zip(&v[1..]).map(|(a, b)| a * b).sum();
    let beta = x[0] + (v[0] - scale) * p / d;
    let v1s = v[0] / scale;

    gv[0] += g[0] * x[0] + v1s * a_dot + (p / d) * (1.0 - v1s) * b_dot;
    let c1 = (v[0] - scale) / d * b_dot;
    let c2 = p / (scale * d) * b_dot;
    let c3 = 2.0 * (v[0] - scale) * p / (d * d) * b_dot;
    for m in 1..k {
        gv[m] += -g[0] * x[m] + v[m] / scale * a_dot + g[m] * beta + c1 * x[m]
            - c2 * v[m]
            - c3 * v[m];
    }
}

/// Row-wise rotor application: row `i` of `out` is `apply_rotor(ops_i, h_i)`.
///
/// All three slices hold `n` rows of `k` entries, row-major.
pub fn apply_rowwise(ops: &[f64], h: &[f64], k: usize, out: &mut [f64]) {
    assert_eq!(ops.len(), h.len(), "row count mismatch between operator and matrix");
    assert_eq!(h.len(), out.len(), "row count mismatch between matrix and output");
    assert_eq!(h.len() % k, 0, "matrix length {} not a multiple of k={k}", h.len());
    for ((op, hx), o) in ops
        .chunks_exact(k)
        .zip(h.chunks_exact(k))
        .zip(out.chunks_exact_mut(k))
    {
        apply_rotor(op, hx, o);
    }
}

/// Trace inner product `⟨A, B⟩ = tr(ABᵀ)`: the sum of the entrywise
/// products.
pub fn inner_product(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "inner_product shape mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Transform a head matrix by the relation/time rotor `[r|τ]` and then
/// the static rotor `r₂`, writing the intermediate into `mid` and the
/// final transformed head into `out`.
///
/// `head`, `static_rotor`, `mid`, `out` are `n×k`; `rel` is `n_r×k` and
/// `time` is `n_τ×k` with `n_r + n_τ = n`. Applications compose
/// left-to-right: `(h ∘ [r|τ]) ∘ r₂`.
pub fn transform_head(
    head: &[f64],
    rel: &[f64],
    time: &[f64],
    static_rotor: &[f64],
    k: usize,
    mid: &mut [f64],
    out: &mut [f64],
) {
    let n = head.len() / k;
    assert_eq!(head.len(), n * k);
    assert_eq!(
        rel.len() + time.len(),
        n * k,
        "relation rows ({}) + time rows ({}) must cover n={n} rows of k={k}",
        rel.len() / k,
        time.len() / k
    );
    assert_eq!(static_rotor.len(), n * k, "static rotor shape mismatch");
    assert_eq!(mid.len(), n * k);
    assert_eq!(out.len(), n * k);

    let split = rel.len();
    apply_rowwise(rel, &head[..split], k, &mut mid[..split]);
    apply_rowwise(time, &head[split..], k, &mut mid[split..]);
    apply_rowwise(static_rotor, mid, k, out);
}

/// Score a single quadruple: `⟨(h ∘ [r|τ]) ∘ r₂, t⟩`.
pub fn score(
    head: &[f64],
    rel: &[f64],
    time: &[f64],
    static_rotor: &[f64],
    tail: &[f64],
    k: usize,
) -> f64 {
    let mut mid = vec![0.0; head.len()];
    let mut z = vec![0.0; head.len()];
    transform_head(head, rel, time, static_rotor, k, &mut mid, &mut z);
    inner_product(&z, tail)
}

/// Score one transformed query against every entity row.
///
/// The head transform is computed once; element `e` of the result is
/// bitwise equal to `score(head, rel, time, static_rotor, entities[e], k)`.
pub fn score_all_tails(
    head: &[f64],
    rel: &[f64],
    time: &[f64],
    static_rotor: &[f64],
    entities: ArrayView2<'_, f64>,
    k: usize,
) -> Vec<f64> {
    let mut mid = vec![0.0; head.len()];
    let mut z = vec![0.0; head.len()];
    transform_head(head, rel, time, static_rotor, k, &mut mid, &mut z);
    scores_against(&z, entities)
}

/// Inner products of one transformed head against every entity row.
pub fn scores_against(z: &[f64], entities: ArrayView2<'_, f64>) -> Vec<f64> {
    assert_eq!(entities.ncols(), z.len(), "entity table width mismatch");
    entities
        .rows()
        .into_iter()
        .map(|row| {
            row.as_slice()
                .map(|r| inner_product(z, r))
                .unwrap_or_else(|| row.iter().zip(z).map(|(a, b)| a * b).sum())
        })
        .collect()
}

#[inline]
fn complex_mul(a_re: f64, a_im: f64, b_re: f64, b_im: f64) -> (f64, f64) {
    (a_re * b_re - a_im * b_im, a_re * b_im + a_im * b_re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn norm(x: &[f64]) -> f64 {
        x.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    #[test]
    fn identity_rotor_is_identity() {
        let v = [1.0, 0.0];
        let x = [3.5, -2.25];
        let mut out = [0.0; 2];
        apply_rotor(&v, &x, &mut out);
        assert_eq!(out, x);
    }

    #[test]
    fn rotor_2i_rotates_and_scales() {
        // v = 2i: multiply by 2 and rotate 90°.
        let v = [0.0, 2.0];
        let mut out = [0.0; 2];
        apply_rotor(&v, &[1.0, 0.0], &mut out);
        assert_eq!(out, [0.0, 2.0]);
        apply_rotor(&v, &[0.0, 1.0], &mut out);
        assert_eq!(out, [-2.0, 0.0]);
    }

    #[test]
    fn zero_rotor_gives_zero() {
        let v = [0.0, 0.0, 0.0];
        let mut out = [1.0; 3];
        apply_rotor(&v, &[1.0, 2.0, 3.0], &mut out);
        assert_eq!(out, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn k3_norm_and_anchor() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let v: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
            let mut out = vec![0.0; 3];
            apply_rotor(&v, &x, &mut out);
            let rel = (norm(&out) - norm(&v) * norm(&x)).abs()
                / (1.0 + norm(&v) * norm(&x));
            assert!(rel < 1e-12, "norm multiplicativity violated: {rel}");

            let e1 = [1.0, 0.0, 0.0];
            apply_rotor(&v, &e1, &mut out);
            for (a, b) in out.iter().zip(&v) {
                assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "e1 anchoring violated");
            }
        }
    }

    #[test]
    fn k2_general_path_matches_complex() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let v = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let x = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let mut general = [0.0; 2];
            apply_rotor_general(&v, &x, &mut general);
            let expect = complex_mul(v[0], v[1], x[0], x[1]);
            assert!((general[0] - expect.0).abs() < 1e-12 * (1.0 + expect.0.abs()));
            assert!((general[1] - expect.1).abs() < 1e-12 * (1.0 + expect.1.abs()));
        }
    }

    #[test]
    fn axis_guard_negative_e1() {
        // v ≈ −2e₁: limit is −2x.
        let v = [-2.0, 1e-12, 0.0];
        let x = [0.5, 1.0, -1.0];
        let mut out = [0.0; 3];
        apply_rotor(&v, &x, &mut out);
        for (o, xi) in out.iter().zip(&x) {
            assert!((o - (-2.0) * xi).abs() < 1e-9);
        }
    }

    #[test]
    fn scale_factors_out() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let k = if rng.random_range(0..2) == 0 { 2 } else { 3 };
            let v: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
            let x: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
            let c = rng.random_range(0.1..3.0);
            let cv: Vec<f64> = v.iter().map(|a| c * a).collect();
            let mut lhs = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            apply_rotor(&cv, &x, &mut lhs);
            apply_rotor(&v, &x, &mut rhs);
            for (l, r) in lhs.iter().zip(&rhs) {
                assert!((l - c * r).abs() < 1e-12 * (1.0 + (c * r).abs()));
            }
        }
    }

    #[test]
    fn transpose_is_adjoint() {
        // ⟨M(v)x, g⟩ = ⟨x, M(v)ᵀg⟩ for random inputs, k ∈ {2, 3, 5}.
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for &k in &[2usize, 3, 5] {
            for _ in 0..100 {
                let v: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
                let x: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
                let g: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
                let mut mx = vec![0.0; k];
                let mut mtg = vec![0.0; k];
                apply_rotor(&v, &x, &mut mx);
                apply_rotor_transpose(&v, &g, &mut mtg);
                let lhs = inner_product(&mx, &g);
                let rhs = inner_product(&x, &mtg);
                assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
            }
        }
    }

    #[test]
    fn grad_v_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let h = 1e-6;
        for &k in &[2usize, 3, 4] {
            for _ in 0..50 {
                let v: Vec<f64> = (0..k).map(|_| rng.random_range(-1.5..1.5)).collect();
                let x: Vec<f64> = (0..k).map(|_| rng.random_range(-1.5..1.5)).collect();
                let g: Vec<f64> = (0..k).map(|_| rng.random_range(-1.5..1.5)).collect();
                let mut gv = vec![0.0; k];
                rotor_grad_v(&v, &x, &g, &mut gv);
                for i in 0..k {
                    let mut vp = v.clone();
                    let mut vm = v.clone();
                    vp[i] += h;
                    vm[i] -= h;
                    let mut op = vec![0.0; k];
                    let mut om = vec![0.0; k];
                    apply_rotor(&vp, &x, &mut op);
                    apply_rotor(&vm, &x, &mut om);
                    let fd = (inner_product(&op, &g) - inner_product(&om, &g)) / (2.0 * h);
                    assert!(
                        (gv[i] - fd).abs() < 1e-6 * (1.0 + fd.abs()),
                        "k={k} i={i}: analytic {} vs fd {}",
                        gv[i],
                        fd
                    );
                }
            }
        }
    }

    #[test]
    fn score_identity_rotors_is_inner_product() {
        let n = 3;
        let k = 2;
        let head = [0.3, -0.1, 0.7, 0.2, -0.5, 0.9];
        let tail = [1.0, 0.5, -0.4, 0.1, 0.3, -0.2];
        let e1_rows = [1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        let s = score(&head, &e1_rows[..2 * k], &e1_rows[2 * k..], &e1_rows, &tail, k);
        assert!((s - inner_product(&head, &tail)).abs() < 1e-15);
        let _ = n;
    }

    #[test]
    fn score_90_degree_rotation() {
        // n=1, k=2: h=(1,0), rotor=(0,1), r₂=(1,0), t=(0,1) → 1.
        let s = score(&[1.0, 0.0], &[0.0, 1.0], &[], &[1.0, 0.0], &[0.0, 1.0], 2);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn score_all_matches_individual_scores() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let (n, k, e) = (4, 2, 10);
        let (n_r, _n_t) = (1, 3);
        let head: Vec<f64> = (0..n * k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let rel: Vec<f64> = (0..n_r * k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let time: Vec<f64> = (0..(n - n_r) * k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r2: Vec<f64> = (0..n * k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let table = ndarray::Array2::from_shape_fn((e, n * k), |_| rng.random_range(-1.0..1.0));

        let all = score_all_tails(&head, &rel, &time, &r2, table.view(), k);
        for (i, row) in table.rows().into_iter().enumerate() {
            let one = score(&head, &rel, &time, &r2, row.as_slice().unwrap(), k);
            assert_eq!(all[i], one, "entity {i} differs");
        }
    }

    #[test]
    #[should_panic(expected = "row count mismatch")]
    fn rowwise_shape_mismatch_panics() {
        let mut out = [0.0; 2];
        apply_rowwise(&[1.0, 0.0, 0.0, 1.0], &[1.0, 0.0], 2, &mut out);
    }
}
