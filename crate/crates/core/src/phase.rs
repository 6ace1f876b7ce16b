//! Edge and cycle phases: dynamical actions, geometric (parallel-transport)
//! phases, regularized action sums, Maslov counts, and cycle holonomies.
//!
//! Between crossings a branch amplitude carries the WKB phase
//! `exp(i action / h + i berry + i maslov pi/2)`. Around a closed cycle of
//! the dispersion relation the composite is the holonomy
//! `H = exp(i (S0 / h + S1_nabla + m pi/2))` where
//!
//! * `S0` is the oriented sum of branch actions plus per-vertex counter
//!   terms `sigma gamma0 (ln gamma0 - 1)` that absorb the `delta ln h`
//!   phase divergence of the local transition amplitudes,
//! * `S1_nabla` collects geometric phases (plus fixed per-vertex frame
//!   phases), and
//! * `m` is a half-integer count: +/-2 for the smooth cycle plus +/-1/2 per
//!   vertex.
//!
//! The per-vertex signs live in the calibrated constant table of the graph
//! layer; this module consumes them through `CycleSkeleton` and stays
//! convention-agnostic.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::HamiltonianFamily;
use crate::numeric::{eig_herm, phase_fix_columns, CMat, HermitianMatrix};
use crate::spectral::{avoided_params, Crossing};

/// Absolute tolerance of the adaptive action quadrature.
pub const ACTION_TOL: f64 = 1e-11;
/// Geometric-phase convergence target under step halving.
pub const BERRY_TOL: f64 = 1e-8;
/// Maximum phase increment allowed per transport micro-step.
const BERRY_MAX_STEP_PHASE: f64 = 1e-3;
/// Relative spectral gap below which a point counts as degenerate.
const DEGENERACY_TOL: f64 = 1e-10;

/// Phases attached to one branch arc.
#[derive(Debug, Clone)]
pub struct EdgePhase {
    /// Directed integral of the branch eigenvalue over the arc.
    pub action: f64,
    /// Geometric phase of the arc, reduced to [0, 2 pi).
    pub berry: f64,
    /// Half-unit Maslov contributions booked on this arc (the count of
    /// +/-1/2 terms assigned to the arc's start vertex).
    pub maslov_halves: i64,
}

/// One vertex of a cycle with its calibrated phase conventions.
#[derive(Debug, Clone)]
pub struct CycleVertex {
    /// The underlying crossing.
    pub crossing: Crossing,
    /// Sign of the counter term `gamma0 (ln gamma0 - 1)` at this vertex.
    pub counter_sign: f64,
    /// +/-1: this vertex's Maslov contribution in units of 1/2, for the
    /// standard (clockwise) orientation.
    pub sing_halves: i64,
    /// Fixed frame phase of the vertex in units of pi/2, added to S1.
    pub iso_quarters: i64,
}

/// One directed arc of a cycle: sorted branch `branch` traversed from
/// `t_from` to `t_to` (decreasing time means reverse traversal).
#[derive(Debug, Clone)]
pub struct CycleArc {
    pub branch: usize,
    pub t_from: f64,
    pub t_to: f64,
}

/// Combinatorial cycle data, ready for phase evaluation.
///
/// `arcs[k]` starts at `vertices[k]` and ends at `vertices[k+1 mod V]`; a
/// vertex-free skeleton (smooth cycle) carries only arcs. `clockwise`
/// records the traversal orientation in the (t, eigenvalue) plane.
#[derive(Debug, Clone)]
pub struct CycleSkeleton {
    pub vertices: Vec<CycleVertex>,
    pub arcs: Vec<CycleArc>,
    pub clockwise: bool,
}

/// A cycle with all phases evaluated at one `(mu, h)`.
#[derive(Debug, Clone)]
pub struct Cycle {
    /// Crossings around the cycle, in traversal order.
    pub vertices: Vec<Crossing>,
    /// Arc phases in traversal order.
    pub edges: Vec<EdgePhase>,
    /// Regularized action `S0`.
    pub s0: f64,
    /// Geometric + frame phase `S1` (without the Maslov part).
    pub s1_nabla: f64,
    /// Half-integer Maslov count `m`.
    pub maslov: f64,
    /// `exp(i (S0/h + S1_nabla + m pi/2))`; unit modulus by construction.
    pub holonomy: C64,
}

impl CycleSkeleton {
    /// Validate the chain structure: arcs close up cyclically, junction
    /// times match the vertex times, and (when vertices are present)
    /// consecutive arcs lie on different branches.
    pub fn validate(&self) -> Result<()> {
        let n = self.arcs.len();
        if n < 2 {
            return Err(Error::Structure(format!(
                "a cycle needs at least 2 arcs, got {n}"
            )));
        }
        if !self.vertices.is_empty() && self.vertices.len() != n {
            return Err(Error::Structure(format!(
                "cycle has {} arcs but {} vertices; each junction must be a vertex",
                n,
                self.vertices.len()
            )));
        }
        let scale = self
            .arcs
            .iter()
            .fold(1.0_f64, |acc, a| acc.max(a.t_from.abs()).max(a.t_to.abs()));
        for k in 0..n {
            let next = (k + 1) % n;
            if (self.arcs[k].t_to - self.arcs[next].t_from).abs() > 1e-9 * scale {
                return Err(Error::Structure(format!(
                    "arc {k} ends at t = {} but arc {next} starts at t = {}; not a closed cycle",
                    self.arcs[k].t_to, self.arcs[next].t_from
                )));
            }
            if !self.vertices.is_empty() {
                if self.arcs[k].branch == self.arcs[next].branch {
                    return Err(Error::Structure(format!(
                        "arcs {k} and {next} lie on the same branch across a vertex; \
                         cycle arcs must alternate between the bounding branches"
                    )));
                }
                let v = &self.vertices[next];
                if (self.arcs[k].t_to - v.crossing.t_star).abs() > 1e-9 * scale {
                    return Err(Error::Structure(format!(
                        "junction of arcs {k}/{next} at t = {} does not sit on its vertex (t_star = {})",
                        self.arcs[k].t_to, v.crossing.t_star
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Integrate the sorted branch eigenvalue over `[t1, t2]` with adaptive
/// quadrature to absolute tolerance `ACTION_TOL`.
///
/// The branch must stay simple strictly inside the interval; the endpoints
/// may touch a crossing (eigenvalues are continuous there, so the integral
/// is unaffected).
pub fn dynamical_action(
    f: &HamiltonianFamily,
    mu: &[f64],
    branch: usize,
    t1: f64,
    t2: f64,
) -> Result<f64> {
    if branch >= f.n() {
        return Err(Error::Domain(format!(
            "branch {branch} out of range for {} channels",
            f.n()
        )));
    }
    if !(t1 < t2) {
        return Err(Error::Domain(format!(
            "action interval [{t1}, {t2}] must be increasing"
        )));
    }
    let margin = 1e-9 * (t2 - t1);
    let lam = |t: f64| -> Result<f64> {
        let e = eig_herm(&f.evaluate(t, mu)?)?;
        // Interior degeneracy guard (endpoint-adjacent nodes excluded:
        // arcs legitimately end on crossings).
        if t - t1 > margin && t2 - t > margin {
            let scale = e.values.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
            if branch > 0 && e.values[branch] - e.values[branch - 1] < DEGENERACY_TOL * scale {
                return Err(Error::DegenerateSpectrum(format!(
                    "branch {branch} touches branch {} at t = {t}",
                    branch - 1
                )));
            }
            if branch + 1 < e.values.len()
                && e.values[branch + 1] - e.values[branch] < DEGENERACY_TOL * scale
            {
                return Err(Error::DegenerateSpectrum(format!(
                    "branch {branch} touches branch {} at t = {t}",
                    branch + 1
                )));
            }
        }
        Ok(e.values[branch])
    };
    adaptive_simpson(&lam, t1, t2, ACTION_TOL)
}

/// Adaptive Simpson quadrature with Richardson end correction.
fn adaptive_simpson(g: &impl Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = g(a)?;
    let fb = g(b)?;
    let m = 0.5 * (a + b);
    let fm = g(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut evals: u64 = 3;
    simpson_rec(g, a, fa, m, fm, b, fb, whole, tol, 48, &mut evals)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    g: &impl Fn(f64) -> Result<f64>,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    evals: &mut u64,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = g(lm)?;
    let frm = g(rm)?;
    *evals += 2;
    if *evals > 4_000_000 {
        return Err(Error::Quadrature(format!(
            "action quadrature on [{a}, {b}] exceeded its evaluation budget"
        )));
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    let half = 0.5 * tol;
    Ok(
        simpson_rec(g, a, fa, lm, flm, m, fm, left, half, depth - 1, evals)?
            + simpson_rec(g, m, fm, rm, frm, b, fb, right, half, depth - 1, evals)?,
    )
}

/// Geometric phase of one sorted branch of a Hermitian matrix path.
///
/// Transports the phase-fixed eigenvector at `t1` by projector micro-steps
/// (project onto the branch eigenspace, renormalize) and accumulates the
/// phase drift against the phase-fixed reference eigenvector field. The
/// result is unwrapped (not reduced mod 2 pi) and converged to `BERRY_TOL`
/// under step halving, with every micro-step increment kept below 1e-3.
///
/// Works on any matrix path, not just polynomial families; `berry_phase`
/// wraps it for a `HamiltonianFamily`.
pub fn berry_transport(
    m: &impl Fn(f64) -> Result<HermitianMatrix>,
    branch: usize,
    t1: f64,
    t2: f64,
) -> Result<f64> {
    if !(t1 < t2) {
        return Err(Error::Domain(format!(
            "transport interval [{t1}, {t2}] must be increasing"
        )));
    }
    // Endpoints may sit exactly on a crossing where the branch frame is
    // ill-defined; shrink inward by the smallest margin that restores a
    // simple spectrum (phase error O(margin)).
    let len = t2 - t1;
    let lo = clip_to_simple(m, branch, t1, len, 1.0)?;
    let hi = clip_to_simple(m, branch, t2, len, -1.0)?;
    if !(lo < hi) {
        return Err(Error::DegenerateSpectrum(format!(
            "branch {branch} is degenerate across all of [{t1}, {t2}]"
        )));
    }

    let mut n: u64 = 256;
    let mut prev = transport_pass(m, branch, lo, hi, n)?;
    loop {
        n *= 2;
        if n > (1 << 22) {
            return Err(Error::Quadrature(format!(
                "geometric-phase transport on [{t1}, {t2}] did not converge within the step budget"
            )));
        }
        let cur = transport_pass(m, branch, lo, hi, n)?;
        if cur.max_increment < BERRY_MAX_STEP_PHASE
            && (cur.phase - prev.phase).abs() < BERRY_TOL
        {
            return Ok(cur.phase);
        }
        prev = cur;
    }
}

/// Move `t` inward (direction = +1 from the left end, -1 from the right)
/// until the branch is simple there.
fn clip_to_simple(
    m: &impl Fn(f64) -> Result<HermitianMatrix>,
    branch: usize,
    t: f64,
    len: f64,
    direction: f64,
) -> Result<f64> {
    let mut shift = 0.0;
    loop {
        let tt = t + direction * shift;
        let e = eig_herm(&m(tt)?)?;
        let scale = e.values.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        let lo_gap = if branch > 0 {
            e.values[branch] - e.values[branch - 1]
        } else {
            f64::INFINITY
        };
        let hi_gap = if branch + 1 < e.values.len() {
            e.values[branch + 1] - e.values[branch]
        } else {
            f64::INFINITY
        };
        if lo_gap.min(hi_gap) > DEGENERACY_TOL * scale {
            return Ok(tt);
        }
        shift = if shift == 0.0 { 1e-12 * len } else { 2.0 * shift };
        if shift > 1e-6 * len {
            return Err(Error::DegenerateSpectrum(format!(
                "branch {branch} stays degenerate near t = {t}; interior degeneracy, not an endpoint touch"
            )));
        }
    }
}

struct TransportResult {
    phase: f64,
    max_increment: f64,
}

fn transport_pass(
    m: &impl Fn(f64) -> Result<HermitianMatrix>,
    branch: usize,
    t1: f64,
    t2: f64,
    n: u64,
) -> Result<TransportResult> {
    let dt = (t2 - t1) / n as f64;
    let first = branch_frame(m, branch, t1)?;
    let dim = first.len();
    let mut a: Vec<C64> = first.clone();
    // a equals the reference at t1, so the initial overlap is exactly 1.
    let mut prev_overlap = C64::new(1.0, 0.0);
    let mut phase = 0.0;
    let mut max_inc: f64 = 0.0;

    for k in 1..=n {
        let t = t1 + k as f64 * dt;
        let v_ref = branch_frame(m, branch, t)?;
        // Project the transported vector on the branch line at t. Any
        // representative of the eigenline works; the phase-fixed one also
        // serves as the reference below.
        let mut inner = C64::new(0.0, 0.0);
        for i in 0..dim {
            inner += v_ref[i].conj() * a[i];
        }
        let mag = inner.norm();
        if mag < 0.5 {
            return Err(Error::DegenerateSpectrum(format!(
                "branch {branch} rotated too fast near t = {t}; spectral gap too small for transport"
            )));
        }
        let u = inner / mag;
        for (ai, vi) in a.iter_mut().zip(v_ref.iter()) {
            *ai = *vi * u;
        }
        // Overlap with the reference field is exactly u; accumulate its
        // drift.
        let inc = (u * prev_overlap.conj()).arg();
        phase += inc;
        max_inc = max_inc.max(inc.abs());
        prev_overlap = u;
    }
    Ok(TransportResult { phase, max_increment: max_inc })
}

/// Phase-fixed eigenvector of one sorted branch at time `t`.
fn branch_frame(
    m: &impl Fn(f64) -> Result<HermitianMatrix>,
    branch: usize,
    t: f64,
) -> Result<Vec<C64>> {
    let e = eig_herm(&m(t)?)?;
    let mut v = e.vectors;
    phase_fix_columns(&mut v);
    Ok(v.col(branch))
}

/// Geometric phase of a family branch between `t1 < t2` at fixed `mu`.
pub fn berry_phase(
    f: &HamiltonianFamily,
    mu: &[f64],
    branch: usize,
    t1: f64,
    t2: f64,
) -> Result<f64> {
    if branch >= f.n() {
        return Err(Error::Domain(format!(
            "branch {branch} out of range for {} channels",
            f.n()
        )));
    }
    let m = |t: f64| f.evaluate(t, mu);
    berry_transport(&m, branch, t1, t2)
}

/// Directed action of a cycle arc (negates when traversed against time).
fn directed_action(f: &HamiltonianFamily, mu: &[f64], arc: &CycleArc) -> Result<f64> {
    if arc.t_from < arc.t_to {
        dynamical_action(f, mu, arc.branch, arc.t_from, arc.t_to)
    } else {
        Ok(-dynamical_action(f, mu, arc.branch, arc.t_to, arc.t_from)?)
    }
}

/// Directed geometric phase of a cycle arc.
fn directed_berry(f: &HamiltonianFamily, mu: &[f64], arc: &CycleArc) -> Result<f64> {
    if arc.t_from < arc.t_to {
        berry_phase(f, mu, arc.branch, arc.t_from, arc.t_to)
    } else {
        Ok(-berry_phase(f, mu, arc.branch, arc.t_to, arc.t_from)?)
    }
}

/// Regularized action of a cycle:
/// oriented arc-action sum plus `sigma gamma0 (ln gamma0 - 1)` per vertex
/// (continuous through gamma0 = 0, where the term vanishes).
pub fn regularized_s0(f: &HamiltonianFamily, skel: &CycleSkeleton, mu: &[f64]) -> Result<f64> {
    skel.validate()?;
    let mut s0 = 0.0;
    for arc in &skel.arcs {
        s0 += directed_action(f, mu, arc)?;
    }
    for v in &skel.vertices {
        s0 += v.counter_sign * counter_term(f, &v.crossing, mu)?;
    }
    Ok(s0)
}

/// `gamma0 (ln gamma0 - 1)` for one vertex at `mu`, with the limit value 0
/// at gamma0 = 0.
fn counter_term(f: &HamiltonianFamily, c: &Crossing, mu: &[f64]) -> Result<f64> {
    let p = avoided_params(f, c, mu)?;
    if p.gamma0 == 0.0 {
        return Ok(0.0);
    }
    Ok(p.gamma0 * (p.gamma0.ln() - 1.0))
}

/// Half-integer Maslov count of a cycle: +/-2 for the smooth part (sign by
/// orientation) plus the calibrated +/-1/2 per vertex.
pub fn maslov_index(skel: &CycleSkeleton) -> Result<f64> {
    skel.validate()?;
    let orient = if skel.clockwise { 1.0 } else { -1.0 };
    let halves: i64 = skel.vertices.iter().map(|v| v.sing_halves).sum();
    Ok(orient * (2.0 + 0.5 * halves as f64))
}

/// Evaluate all phases of a cycle at `(mu, h)` and build its holonomy
/// `exp(i (S0/h + S1 + m pi/2))` (unit modulus by construction).
pub fn cycle_holonomy(
    f: &HamiltonianFamily,
    mu: &[f64],
    h: f64,
    skel: &CycleSkeleton,
) -> Result<Cycle> {
    skel.validate()?;
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::Domain(format!("h = {h} must be finite and > 0")));
    }
    let s0 = regularized_s0(f, skel, mu)?;
    let mut s1_nabla = 0.0;
    let mut edges = Vec::with_capacity(skel.arcs.len());
    for (k, arc) in skel.arcs.iter().enumerate() {
        let action = directed_action(f, mu, arc)?;
        let berry = directed_berry(f, mu, arc)?;
        s1_nabla += berry;
        let maslov_halves = skel.vertices.get(k).map_or(0, |v| v.sing_halves);
        edges.push(EdgePhase {
            action,
            berry: berry.rem_euclid(2.0 * PI),
            maslov_halves,
        });
    }
    for v in &skel.vertices {
        s1_nabla += v.iso_quarters as f64 * 0.5 * PI;
    }
    let maslov = maslov_index(skel)?;
    let phase = s0 / h + s1_nabla + maslov * 0.5 * PI;
    Ok(Cycle {
        vertices: skel.vertices.iter().map(|v| v.crossing.clone()).collect(),
        edges,
        s0,
        s1_nabla,
        maslov,
        holonomy: C64::from_polar(1.0, phase),
    })
}
