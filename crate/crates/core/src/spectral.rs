//! Eigenvalue crossings and avoided-crossing parameters.
//!
//! At `mu = 0` the engine traces the smooth (diabatic) eigenvalue branches
//! of `A_0(t)` by matching eigenvectors across a dense grid, locates every
//! transversal pairwise crossing by bisecting sign changes of smooth branch
//! differences, and certifies the slopes of the two branches through each
//! crossing. At `mu != 0` the crossing opens into an avoided crossing whose
//! minimal gap determines the transition strength
//! `gamma0 = gap^2 / (4 |slope_plus - slope_minus|)`.
//!
//! Sorted eigenvalue branches kink at a crossing, so slopes are never read
//! off sorted data: the stored slopes come from first-order degenerate
//! perturbation theory (eigenvalues of the crossing-pair block of `A'(t*)`),
//! and are cross-checked against finite differences of the smooth
//! continuations.

use crate::error::{Error, Result};
use crate::model::HamiltonianFamily;
use crate::numeric::{eig_herm, CMat};

/// Scan resolution for branch tracing: grid points per unit of t.
pub const SCAN_DENSITY: f64 = 2048.0;
/// Bisection / golden-section tolerance in t.
const T_TOL: f64 = 1e-12;
/// Minimal relative slope separation for a crossing to count as transversal.
const TRANSVERSALITY_TOL: f64 = 1e-6;
/// Half-width of the finite-difference stencil for slope certification.
const FD_DELTA: f64 = 1e-6;

/// A transversal pairwise crossing of eigenvalue branches at `mu = 0`.
#[derive(Debug, Clone)]
pub struct Crossing {
    /// Crossing time.
    pub t_star: f64,
    /// Sorted-order indices (j, j+1) of the two branches that meet
    /// (0-based, ascending eigenvalue order at t_star).
    pub branch_pair: (usize, usize),
    /// Common eigenvalue at the crossing.
    pub lambda_star: f64,
    /// Smaller of the two smooth-branch slopes through the crossing.
    pub slope_minus: f64,
    /// Larger of the two smooth-branch slopes.
    pub slope_plus: f64,
    /// Half-width of the search window around t_star in which the avoided
    /// gap minimum must stay (half the distance to the nearest other
    /// crossing or domain edge).
    pub window: f64,
}

impl Crossing {
    /// Magnitude of the slope difference entering gamma0.
    pub fn slope_gap(&self) -> f64 {
        (self.slope_plus - self.slope_minus).abs()
    }
}

/// Gap data of one avoided crossing at a specific `mu`.
#[derive(Debug, Clone)]
pub struct AvoidedParams {
    /// The underlying `mu = 0` crossing.
    pub crossing: Crossing,
    /// Gap parameters used.
    pub mu: Vec<f64>,
    /// Minimal gap of the avoided pair over the window.
    pub gap: f64,
    /// Transition strength `gap^2 / (4 |slope_plus - slope_minus|)`.
    pub gamma0: f64,
    /// Location of the minimal gap.
    pub t_min: f64,
}

fn eig_at(f: &HamiltonianFamily, t: f64, mu: &[f64]) -> Result<(Vec<f64>, CMat)> {
    let m = f.evaluate(t, mu)?;
    let e = eig_herm(&m)?;
    Ok((e.values, e.vectors))
}

/// Overlap magnitudes between two eigenvector frames: o[p][c] =
/// |<prev col p, cur col c>|.
fn overlap_matrix(prev: &CMat, cur: &CMat) -> Vec<Vec<f64>> {
    let n = prev.dim();
    let mut o = vec![vec![0.0; n]; n];
    for p in 0..n {
        for c in 0..n {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for i in 0..n {
                acc += prev[(i, p)].conj() * cur[(i, c)];
            }
            o[p][c] = acc.norm();
        }
    }
    o
}

/// Assign current sorted columns to previous sorted columns by repeatedly
/// taking the globally largest remaining overlap. Returns map
/// cur_sorted_index -> prev_sorted_index.
fn match_frames(prev: &CMat, cur: &CMat) -> Vec<usize> {
    let n = prev.dim();
    let o = overlap_matrix(prev, cur);
    let mut cur_to_prev = vec![usize::MAX; n];
    let mut prev_used = vec![false; n];
    let mut cur_used = vec![false; n];
    for _ in 0..n {
        let mut best = -1.0;
        let (mut bp, mut bc) = (0, 0);
        for p in 0..n {
            if prev_used[p] {
                continue;
            }
            for c in 0..n {
                if cur_used[c] {
                    continue;
                }
                if o[p][c] > best {
                    best = o[p][c];
                    bp = p;
                    bc = c;
                }
            }
        }
        prev_used[bp] = true;
        cur_used[bc] = true;
        cur_to_prev[bc] = bp;
    }
    cur_to_prev
}

/// Locate every transversal pairwise crossing of the `mu = 0` eigenvalue
/// branches of `f` on `[a, b]` (a subinterval of the family domain).
pub fn find_crossings(f: &HamiltonianFamily, a: f64, b: f64) -> Result<Vec<Crossing>> {
    find_crossings_scan(f, a, b, SCAN_DENSITY)
}

/// Scan with an explicit grid density (exposed for grid-robustness checks).
pub fn find_crossings_scan(
    f: &HamiltonianFamily,
    a: f64,
    b: f64,
    density: f64,
) -> Result<Vec<Crossing>> {
    let (da, db) = f.domain();
    if a < da - 1e-12 || b > db + 1e-12 || a >= b {
        return Err(Error::Domain(format!(
            "scan interval [{a}, {b}] is not inside the family domain [{da}, {db}]"
        )));
    }
    let mu0 = vec![0.0; f.d()];
    let n = f.n();
    let cells = ((density * (b - a)).ceil() as usize).max(256);
    let dt = (b - a) / cells as f64;

    // March the grid, tracking smooth labels by eigenvector overlap.
    // label_of[k][sorted_idx] = smooth label; smooth_val[l][k] = branch value.
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(cells + 1);
    let mut frames: Vec<CMat> = Vec::with_capacity(cells + 1);
    let mut label_of: Vec<Vec<usize>> = Vec::with_capacity(cells + 1);
    for k in 0..=cells {
        let t = a + k as f64 * dt;
        let (vals, vecs) = eig_at(f, t, &mu0)?;
        let labels = if k == 0 {
            (0..n).collect::<Vec<usize>>()
        } else {
            let m = match_frames(&frames[k - 1], &vecs);
            (0..n).map(|c| label_of[k - 1][m[c]]).collect()
        };
        values.push(vals);
        frames.push(vecs);
        label_of.push(labels);
    }
    let smooth_val = |l: usize, k: usize| -> f64 {
        let idx = label_of[k].iter().position(|&x| x == l).expect("label present");
        values[k][idx]
    };

    let scale = values
        .iter()
        .flat_map(|v| v.iter())
        .fold(1.0_f64, |acc, v| acc.max(v.abs()));

    // Sign changes of smooth-branch differences, refined by bisection.
    let mut raw: Vec<f64> = Vec::new();
    for l1 in 0..n {
        for l2 in (l1 + 1)..n {
            for k in 0..=cells {
                let d_k = smooth_val(l1, k) - smooth_val(l2, k);
                if d_k == 0.0 {
                    raw.push(a + k as f64 * dt);
                    continue;
                }
                if k == cells {
                    break;
                }
                let d_next = smooth_val(l1, k + 1) - smooth_val(l2, k + 1);
                if d_next == 0.0 {
                    continue; // handled at the right node
                }
                if d_k * d_next < 0.0 {
                    let t_lo = a + k as f64 * dt;
                    let t_hi = t_lo + dt;
                    raw.push(bisect_crossing(f, &mu0, &frames[k], l1, l2, &label_of[k], t_lo, t_hi, d_k)?);
                }
            }
        }
    }
    raw.sort_by(|x, y| x.partial_cmp(y).unwrap());
    raw.dedup_by(|x, y| (*x - *y).abs() < 1e-9 * (b - a).max(1.0));

    let mut crossings = Vec::with_capacity(raw.len());
    for &t_star in &raw {
        crossings.push(classify_crossing(f, &mu0, t_star, scale, b - a)?);
    }

    // Tangential (even-order) touches never flip the smooth difference, so
    // scan sorted gaps for unexplained near-zero dips and reject them.
    detect_tangential_touches(f, &mu0, a, dt, cells, &values, &raw, scale)?;

    // Windows: half the distance to the nearest other crossing, clipped to
    // the domain.
    let ts: Vec<f64> = crossings.iter().map(|c| c.t_star).collect();
    for c in crossings.iter_mut() {
        let mut w = (c.t_star - a).min(b - c.t_star);
        for &other in &ts {
            if (other - c.t_star).abs() > 1e-9 {
                w = w.min(0.5 * (other - c.t_star).abs());
            }
        }
        c.window = w;
    }
    Ok(crossings)
}

/// Bisect a smooth-difference sign change down to T_TOL, identifying the
/// branches at each probe by overlap with the left-bracket frame.
#[allow(clippy::too_many_arguments)]
fn bisect_crossing(
    f: &HamiltonianFamily,
    mu0: &[f64],
    left_frame: &CMat,
    l1: usize,
    l2: usize,
    left_labels: &[usize],
    mut t_lo: f64,
    mut t_hi: f64,
    d_lo: f64,
) -> Result<f64> {
    let idx1 = left_labels.iter().position(|&x| x == l1).expect("label");
    let idx2 = left_labels.iter().position(|&x| x == l2).expect("label");
    let sign_lo = d_lo.signum();
    while t_hi - t_lo > T_TOL {
        let t_mid = 0.5 * (t_lo + t_hi);
        let (vals, vecs) = eig_at(f, t_mid, mu0)?;
        let m = match_frames(left_frame, &vecs); // cur -> left sorted
        let mut v1 = f64::NAN;
        let mut v2 = f64::NAN;
        for (c, &p) in m.iter().enumerate() {
            if p == idx1 {
                v1 = vals[c];
            } else if p == idx2 {
                v2 = vals[c];
            }
        }
        let d_mid = v1 - v2;
        if d_mid == 0.0 {
            return Ok(t_mid);
        }
        if d_mid.signum() == sign_lo {
            t_lo = t_mid;
        } else {
            t_hi = t_mid;
        }
    }
    Ok(0.5 * (t_lo + t_hi))
}

/// Identify the crossing pair at t_star, check it stays pairwise, and
/// compute certified slopes.
fn classify_crossing(
    f: &HamiltonianFamily,
    mu0: &[f64],
    t_star: f64,
    scale: f64,
    t_len: f64,
) -> Result<Crossing> {
    let n = f.n();
    let (vals, vecs) = eig_at(f, t_star, mu0)?;
    // The crossing pair is the adjacent sorted pair with the smallest gap.
    let mut j = 0;
    let mut best = f64::INFINITY;
    for i in 0..n - 1 {
        let g = vals[i + 1] - vals[i];
        if g < best {
            best = g;
            j = i;
        }
    }
    let lambda_star = 0.5 * (vals[j] + vals[j + 1]);

    // Pairwise only: any third branch this close is beyond the supported
    // normal form.
    for (i, v) in vals.iter().enumerate() {
        if i != j && i != j + 1 && (v - lambda_star).abs() <= 1e-8 * scale {
            return Err(Error::Unsupported(format!(
                "three or more branches meet near t = {t_star} (values {vals:?})"
            )));
        }
    }

    // First-order degenerate perturbation theory: slopes are the eigenvalues
    // of the crossing-pair block of A'(t_star).
    let dm = f.evaluate_dt(t_star, mu0)?;
    let mut block = [[num_complex::Complex64::new(0.0, 0.0); 2]; 2];
    for (bi, col_i) in [j, j + 1].iter().enumerate() {
        for (bj, col_j) in [j, j + 1].iter().enumerate() {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for r in 0..n {
                let mut av = num_complex::Complex64::new(0.0, 0.0);
                for s in 0..n {
                    av += dm.mat()[(r, s)] * vecs[(s, *col_j)];
                }
                acc += vecs[(r, *col_i)].conj() * av;
            }
            block[bi][bj] = acc;
        }
    }
    let mean = 0.5 * (block[0][0].re + block[1][1].re);
    let dev = 0.5 * (block[0][0].re - block[1][1].re);
    let off = block[0][1].norm();
    let half_split = (dev * dev + off * off).sqrt();
    let slope_minus = mean - half_split;
    let slope_plus = mean + half_split;

    // Certify with finite differences of the smooth continuations.
    let delta = FD_DELTA * t_len.max(1.0);
    let (vals_m, vecs_m) = eig_at(f, t_star - delta, mu0)?;
    let (vals_p, vecs_p) = eig_at(f, t_star + delta, mu0)?;
    // Match the crossing pair across the crossing by eigenvector overlap.
    let o = overlap_matrix(&vecs_m, &vecs_p);
    let straight = o[j][j] + o[j + 1][j + 1];
    let swapped = o[j][j + 1] + o[j + 1][j];
    let (fd_a, fd_b) = if straight >= swapped {
        (
            (vals_p[j] - vals_m[j]) / (2.0 * delta),
            (vals_p[j + 1] - vals_m[j + 1]) / (2.0 * delta),
        )
    } else {
        (
            (vals_p[j + 1] - vals_m[j]) / (2.0 * delta),
            (vals_p[j] - vals_m[j + 1]) / (2.0 * delta),
        )
    };
    let (fd_minus, fd_plus) = if fd_a <= fd_b { (fd_a, fd_b) } else { (fd_b, fd_a) };

    let slope_scale = slope_minus.abs().max(slope_plus.abs()).max(1.0);
    if (slope_plus - slope_minus).abs() < TRANSVERSALITY_TOL * slope_scale
        || (fd_plus - fd_minus).abs() < TRANSVERSALITY_TOL * slope_scale
    {
        return Err(Error::Transversality(format!(
            "branches touch tangentially at t = {t_star} (slopes {slope_minus} and {slope_plus})"
        )));
    }
    if (fd_minus - slope_minus).abs() > 1e-4 * slope_scale
        || (fd_plus - slope_plus).abs() > 1e-4 * slope_scale
    {
        return Err(Error::Transversality(format!(
            "slope estimates disagree at t = {t_star}: perturbative ({slope_minus}, {slope_plus}) vs finite-difference ({fd_minus}, {fd_plus})"
        )));
    }

    Ok(Crossing {
        t_star,
        branch_pair: (j, j + 1),
        lambda_star,
        slope_minus,
        slope_plus,
        window: 0.0, // filled by the caller
    })
}

/// Reject even-order touches: sorted-gap dips to (near) zero that no
/// detected sign-change crossing explains.
#[allow(clippy::too_many_arguments)]
fn detect_tangential_touches(
    f: &HamiltonianFamily,
    mu0: &[f64],
    a: f64,
    dt: f64,
    cells: usize,
    values: &[Vec<f64>],
    found: &[f64],
    scale: f64,
) -> Result<()> {
    let n = f.n();
    for j in 0..n - 1 {
        for k in 1..cells {
            let g_prev = values[k - 1][j + 1] - values[k - 1][j];
            let g_here = values[k][j + 1] - values[k][j];
            let g_next = values[k + 1][j + 1] - values[k + 1][j];
            let t_here = a + k as f64 * dt;
            let near_found = found.iter().any(|&t| (t - t_here).abs() < 2.5 * dt);
            if near_found {
                continue;
            }
            if g_here <= g_prev && g_here <= g_next && g_here < 1e-7 * scale {
                // Refine the dip and test whether the branches truly meet.
                let (t_min, g_min) =
                    golden_min(|t| sorted_gap(f, mu0, t, j), t_here - dt, t_here + dt)?;
                if g_min <= 1e-9 * scale {
                    // A genuine contact the sign-change pass did not see:
                    // the touch is of even order, hence tangential.
                    return Err(Error::Transversality(format!(
                        "branches {j} and {} touch tangentially near t = {t_min} (no sign change)",
                        j + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

fn sorted_gap(f: &HamiltonianFamily, mu: &[f64], t: f64, j: usize) -> Result<f64> {
    let m = f.evaluate(t, mu)?;
    let e = eig_herm(&m)?;
    Ok(e.values[j + 1] - e.values[j])
}

/// Golden-section minimization of a scalar function on [lo, hi] to T_TOL.
fn golden_min(
    mut g: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut g1 = g(x1)?;
    let mut g2 = g(x2)?;
    while hi - lo > T_TOL {
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            g1 = g(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            g2 = g(x2)?;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok((t, g(t)?))
}

/// Measure the avoided-crossing gap and transition strength at `mu`.
///
/// The minimal gap of the pair is searched inside the crossing's window; a
/// minimum escaping to the window edge means the avoided crossing is not
/// localized at this `mu` and the run is rejected.
pub fn avoided_params(
    f: &HamiltonianFamily,
    c: &Crossing,
    mu: &[f64],
) -> Result<AvoidedParams> {
    if c.window <= 0.0 {
        return Err(Error::Window(format!(
            "crossing at t = {} has an empty search window",
            c.t_star
        )));
    }
    let j = c.branch_pair.0;
    let lo = c.t_star - c.window;
    let hi = c.t_star + c.window;
    let (t_min, gap) = golden_min(|t| sorted_gap(f, mu, t, j), lo, hi)?;
    let margin = 1e-3 * c.window;
    if t_min - lo < margin || hi - t_min < margin {
        return Err(Error::Window(format!(
            "gap minimum escaped to the window edge (t_min = {t_min}, window [{lo}, {hi}]); avoided crossing not localized"
        )));
    }
    let gamma0 = gap * gap / (4.0 * c.slope_gap());
    Ok(AvoidedParams {
        crossing: c.clone(),
        mu: mu.to_vec(),
        gap,
        gamma0,
        t_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin_family, HamiltonianFamily, Monomial, Polynomial};
    use num_complex::Complex64 as C64;

    fn mono(p_t: u32, p_mu: u32, c: f64) -> Monomial {
        Monomial { powers: vec![p_t, p_mu], coeff: C64::new(c, 0.0) }
    }

    fn poly(ms: Vec<Monomial>) -> Polynomial {
        Polynomial::new(ms, 1).unwrap()
    }

    #[test]
    fn paper_example_crosses_at_unit_times() {
        let f = builtin_family("paper_example").unwrap();
        let (a, b) = f.domain();
        let cs = find_crossings(&f, a, b).unwrap();
        assert_eq!(cs.len(), 2);
        assert!((cs[0].t_star + 1.0).abs() < 1e-9);
        assert!((cs[1].t_star - 1.0).abs() < 1e-9);
        for c in &cs {
            assert!((c.lambda_star - 1.0).abs() < 1e-9);
            assert_eq!(c.branch_pair, (0, 1));
            assert!((c.slope_minus + 2.0).abs() < 1e-7);
            assert!((c.slope_plus - 2.0).abs() < 1e-7);
            assert!(c.window > 0.5);
        }
    }

    #[test]
    fn linear_lz_has_a_single_symmetric_crossing() {
        let f = builtin_family("linear_lz").unwrap();
        let cs = find_crossings(&f, -5.0, 5.0).unwrap();
        assert_eq!(cs.len(), 1);
        assert!(cs[0].t_star.abs() < 1e-9);
        assert!((cs[0].slope_minus + 1.0).abs() < 1e-7);
        assert!((cs[0].slope_plus - 1.0).abs() < 1e-7);
    }

    #[test]
    fn constant_gap_family_has_no_crossings() {
        let f = HamiltonianFamily::new(
            "parallel",
            2,
            1,
            (-1.0, 1.0),
            vec![
                (0, 0, poly(vec![mono(1, 0, 1.0)])),
                (1, 1, poly(vec![mono(1, 0, 1.0), mono(0, 0, 1.0)])),
            ],
        )
        .unwrap();
        let cs = find_crossings(&f, -1.0, 1.0).unwrap();
        assert!(cs.is_empty());
    }

    #[test]
    fn paper_example_gamma0_matches_closed_form() {
        let f = builtin_family("paper_example").unwrap();
        let cs = find_crossings(&f, -3.0, 3.0).unwrap();
        for mu in [1e-3, 0.01, 0.1, 0.3] {
            for c in &cs {
                let p = avoided_params(&f, c, &[mu]).unwrap();
                let expect = mu * mu / 4.0;
                assert!(
                    (p.gamma0 - expect).abs() < 1e-9 * expect,
                    "mu = {mu}: gamma0 = {}, want {expect}",
                    p.gamma0
                );
                assert!((p.gap - 2.0 * mu).abs() < 1e-9 * mu);
            }
        }
    }

    #[test]
    fn linear_lz_gamma0_matches_closed_form() {
        let f = builtin_family("linear_lz").unwrap();
        let cs = find_crossings(&f, -5.0, 5.0).unwrap();
        for mu in [1e-3, 0.01, 0.1, 0.3] {
            let p = avoided_params(&f, &cs[0], &[mu]).unwrap();
            let expect = mu * mu / 2.0;
            assert!(
                (p.gamma0 - expect).abs() < 1e-9 * expect,
                "mu = {mu}: gamma0 = {}, want {expect}",
                p.gamma0
            );
        }
    }

    #[test]
    fn exact_crossing_has_zero_gap() {
        let f = builtin_family("linear_lz").unwrap();
        let cs = find_crossings(&f, -5.0, 5.0).unwrap();
        let p = avoided_params(&f, &cs[0], &[0.0]).unwrap();
        assert!(p.gap < 1e-10);
        assert!(p.gamma0 < 1e-20);
    }

    #[test]
    fn crossing_location_is_grid_robust() {
        let f = builtin_family("paper_example").unwrap();
        let coarse = find_crossings_scan(&f, -3.0, 3.0, 1024.0).unwrap();
        let fine = find_crossings_scan(&f, -3.0, 3.0, 2048.0).unwrap();
        assert_eq!(coarse.len(), fine.len());
        for (c, d) in coarse.iter().zip(fine.iter()) {
            assert!((c.t_star - d.t_star).abs() < 1e-10);
        }
    }

    #[test]
    fn triple_degeneracy_is_rejected() {
        let f = HamiltonianFamily::new(
            "triple",
            3,
            1,
            (-1.0, 1.0),
            vec![
                (0, 0, poly(vec![mono(1, 0, 1.0)])),
                (1, 1, poly(vec![mono(1, 0, -1.0)])),
                // third branch identically zero
            ],
        )
        .unwrap();
        assert!(matches!(
            find_crossings(&f, -1.0, 1.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn tangential_touch_is_rejected() {
        let f = HamiltonianFamily::new(
            "tangential",
            2,
            1,
            (-1.0, 1.0),
            vec![
                (0, 0, poly(vec![mono(2, 0, 1.0)])),
                (1, 1, poly(vec![mono(2, 0, -1.0)])),
            ],
        )
        .unwrap();
        assert!(matches!(
            find_crossings(&f, -1.0, 1.0),
            Err(Error::Transversality(_))
        ));
    }

    #[test]
    fn three_level_chain_has_two_pairwise_crossings() {
        let f = builtin_family("three_level_chain").unwrap();
        let (a, b) = f.domain();
        let cs = find_crossings(&f, a, b).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs[0].t_star.abs() < 1e-9);
        assert_eq!(cs[0].branch_pair, (0, 1));
        assert!((cs[0].slope_minus + 1.0).abs() < 1e-7);
        assert!((cs[0].slope_plus - 1.0).abs() < 1e-7);
        assert!((cs[1].t_star - 1.0).abs() < 1e-9);
        assert_eq!(cs[1].branch_pair, (1, 2));
        assert!((cs[1].slope_minus + 2.0).abs() < 1e-7);
        assert!((cs[1].slope_plus - 1.0).abs() < 1e-7);
    }

    #[test]
    fn escaping_gap_minimum_raises_window_error() {
        // Coupling mu (1 + t) pushes the gap minimum to t = -mu^2/(1+mu^2),
        // outside the tight window around the crossing at t = 0.
        let f = HamiltonianFamily::new(
            "drifting_gap",
            2,
            1,
            (-0.1, 2.0),
            vec![
                (0, 0, poly(vec![mono(1, 0, 1.0)])),
                (0, 1, poly(vec![mono(0, 1, 1.0), mono(1, 1, 1.0)])),
                (1, 1, poly(vec![mono(1, 0, -1.0)])),
            ],
        )
        .unwrap();
        let cs = find_crossings(&f, -0.1, 2.0).unwrap();
        assert_eq!(cs.len(), 1);
        assert!(matches!(
            avoided_params(&f, &cs[0], &[0.5]),
            Err(Error::Window(_))
        ));
        // Small mu keeps the minimum interior.
        assert!(avoided_params(&f, &cs[0], &[0.05]).is_ok());
    }
}
