//! Polynomial Hermitian families `A_mu(t)`.
//!
//! A family is an `n x n` matrix of polynomials in the time variable `t` and
//! the gap parameters `mu = (mu_1, ..., mu_d)`, Hermitian at the coefficient
//! level: the (j, i) entry is the coefficient-wise conjugate of the (i, j)
//! entry, and diagonal entries have real coefficients. Degrees are capped
//! (<= 8 in `t`, <= 4 in each `mu_k`) to keep evaluation, differentiation,
//! and crossing searches well-conditioned on the scales the engine targets.
//!
//! Three built-in families cover the validation surface:
//!
//! * `paper_example`  -- `[[t^2, mu], [mu, 2 - t^2]]` on `[-3, 3]`: two
//!   avoided crossings at `t = +/-1` enclosing one interference cycle;
//! * `linear_lz`      -- `[[t, mu], [mu, -t]]` on `[-5, 5]`: the exactly
//!   solvable single crossing;
//! * `three_level_chain` -- a 3x3 real-symmetric family with two
//!   transversal crossings of different branch pairs and no cycle.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numeric::mat::{CMat, HermitianMatrix};

/// Maximum power of `t` in any entry.
pub const MAX_DEGREE_T: u32 = 8;
/// Maximum power of each `mu_k` in any entry.
pub const MAX_DEGREE_MU: u32 = 4;

/// One term `coeff * t^{p_0} * mu_1^{p_1} * ... * mu_d^{p_d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    /// Exponents `[p_t, p_mu1, ..., p_mud]`.
    pub powers: Vec<u32>,
    /// Complex coefficient.
    pub coeff: C64,
}

/// Sparse polynomial in `(t, mu_1, ..., mu_d)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    terms: Vec<Monomial>,
}

impl Polynomial {
    /// Zero polynomial.
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    /// Build from terms, validating exponent-vector lengths against `d`
    /// gap parameters and the degree caps.
    pub fn new(terms: Vec<Monomial>, d: usize) -> Result<Self> {
        for m in &terms {
            if m.powers.len() != d + 1 {
                return Err(Error::Config(format!(
                    "monomial has {} exponents, expected {} (t plus {} mu parameters)",
                    m.powers.len(),
                    d + 1,
                    d
                )));
            }
            if m.powers[0] > MAX_DEGREE_T {
                return Err(Error::Config(format!(
                    "degree {} in t exceeds the cap {}",
                    m.powers[0], MAX_DEGREE_T
                )));
            }
            for (k, p) in m.powers.iter().enumerate().skip(1) {
                if *p > MAX_DEGREE_MU {
                    return Err(Error::Config(format!(
                        "degree {} in mu_{} exceeds the cap {}",
                        p, k, MAX_DEGREE_MU
                    )));
                }
            }
        }
        Ok(Polynomial { terms })
    }

    /// Terms of this polynomial.
    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial { powers: m.powers.clone(), coeff: m.coeff.conj() })
                .collect(),
        }
    }

    /// Evaluate at `(t, mu)`.
    pub fn eval(&self, t: f64, mu: &[f64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for m in &self.terms {
            let mut v = pow_int(t, m.powers[0]);
            for (k, p) in m.powers.iter().enumerate().skip(1) {
                v *= pow_int(mu[k - 1], *p);
            }
            acc += m.coeff * v;
        }
        acc
    }

    /// Analytic derivative in `t`.
    pub fn derivative_t(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|m| m.powers[0] > 0)
            .map(|m| {
                let mut powers = m.powers.clone();
                let p = powers[0];
                powers[0] = p - 1;
                Monomial { powers, coeff: m.coeff * p as f64 }
            })
            .collect();
        Polynomial { terms }
    }

    /// True when every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|m| m.coeff == C64::new(0.0, 0.0))
    }

    /// Canonical form: merge duplicate exponent vectors, drop exact zeros,
    /// sort by exponents. Used to compare entries for coefficient-level
    /// conjugate symmetry.
    fn canonical(&self) -> Vec<(Vec<u32>, C64)> {
        let mut out: Vec<(Vec<u32>, C64)> = Vec::new();
        for m in &self.terms {
            match out.iter_mut().find(|(p, _)| *p == m.powers) {
                Some((_, c)) => *c += m.coeff,
                None => out.push((m.powers.clone(), m.coeff)),
            }
        }
        out.retain(|(_, c)| c.norm() != 0.0);
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

fn pow_int(x: f64, p: u32) -> f64 {
    // powi is exact enough for the capped degrees and much faster than powf.
    x.powi(p as i32)
}

/// Polynomial Hermitian family on a compact time interval.
#[derive(Debug, Clone)]
pub struct HamiltonianFamily {
    name: String,
    n: usize,
    d: usize,
    domain: (f64, f64),
    /// Row-major `n x n` polynomial entries, Hermitian at coefficient level.
    entries: Vec<Polynomial>,
    /// Analytic t-derivatives of `entries`, precomputed.
    entries_dt: Vec<Polynomial>,
}

/// Dimension caps: channels and gap parameters.
pub const MAX_CHANNELS: usize = 16;
pub const MIN_CHANNELS: usize = 2;

impl HamiltonianFamily {
    /// Build a family from explicit entry polynomials.
    ///
    /// `given` lists (row, col, polynomial) with 0-based indices; at most one
    /// polynomial per position. A missing (j, i) mirror is filled with the
    /// conjugate of (i, j); if both triangles are given they must agree
    /// coefficient-wise with conjugation, and diagonal entries must have
    /// real coefficients.
    pub fn new(
        name: &str,
        n: usize,
        d: usize,
        domain: (f64, f64),
        given: Vec<(usize, usize, Polynomial)>,
    ) -> Result<Self> {
        if !(MIN_CHANNELS..=MAX_CHANNELS).contains(&n) {
            return Err(Error::Config(format!(
                "channel count {n} outside supported range {MIN_CHANNELS}..={MAX_CHANNELS}"
            )));
        }
        if d == 0 {
            return Err(Error::Config("at least one gap parameter mu is required".into()));
        }
        if !(domain.0.is_finite() && domain.1.is_finite()) || domain.0 >= domain.1 {
            return Err(Error::Config(format!(
                "domain [{}, {}] is not a proper interval",
                domain.0, domain.1
            )));
        }

        let mut slots: Vec<Option<Polynomial>> = vec![None; n * n];
        for (i, j, p) in given {
            if i >= n || j >= n {
                return Err(Error::Config(format!(
                    "entry index ({i}, {j}) outside an {n} x {n} matrix"
                )));
            }
            for m in p.terms() {
                if m.powers.len() != d + 1 {
                    return Err(Error::Config(format!(
                        "entry ({i}, {j}) has a monomial with {} exponents, expected {}",
                        m.powers.len(),
                        d + 1
                    )));
                }
            }
            if slots[i * n + j].is_some() {
                return Err(Error::Config(format!("entry ({i}, {j}) given twice")));
            }
            slots[i * n + j] = Some(p);
        }

        // Fill mirrors and check coefficient-level Hermitian symmetry.
        let mut entries: Vec<Polynomial> = vec![Polynomial::zero(); n * n];
        for i in 0..n {
            // Diagonal: real coefficients required.
            let diag = slots[i * n + i].clone().unwrap_or_else(Polynomial::zero);
            for (powers, c) in diag.canonical() {
                if c.im.abs() > 1e-14 * c.norm().max(1.0) {
                    return Err(Error::Config(format!(
                        "diagonal entry ({i}, {i}) has a complex coefficient {c} at exponents {powers:?}"
                    )));
                }
            }
            entries[i * n + i] = diag;
            for j in (i + 1)..n {
                let upper = slots[i * n + j].clone();
                let lower = slots[j * n + i].clone();
                let (u, l) = match (upper, lower) {
                    (Some(u), Some(l)) => {
                        let lc = l.conj().canonical();
                        let uc = u.canonical();
                        if !coeffs_match(&uc, &lc) {
                            return Err(Error::Config(format!(
                                "entries ({i}, {j}) and ({j}, {i}) are not conjugate at the coefficient level"
                            )));
                        }
                        (u, l)
                    }
                    (Some(u), None) => {
                        let l = u.conj();
                        (u, l)
                    }
                    (None, Some(l)) => {
                        let u = l.conj();
                        (u, l)
                    }
                    (None, None) => (Polynomial::zero(), Polynomial::zero()),
                };
                entries[i * n + j] = u;
                entries[j * n + i] = l;
            }
        }

        let entries_dt = entries.iter().map(|p| p.derivative_t()).collect();
        Ok(HamiltonianFamily {
            name: name.to_string(),
            n,
            d,
            domain,
            entries,
            entries_dt,
        })
    }

    /// Family name used in reports.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Channel count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of gap parameters.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Time interval `[a, b]`.
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Entry polynomial at (i, j). Lets hot loops evaluate single entries
    /// without building a full matrix.
    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.n + j]
    }

    fn check_args(&self, t: f64, mu: &[f64]) -> Result<()> {
        let (a, b) = self.domain;
        // A hair of slack so quadrature nodes that round onto the endpoints
        // are not rejected.
        let slack = 1e-9 * (b - a).abs();
        if !(t >= a - slack && t <= b + slack) {
            return Err(Error::Domain(format!(
                "t = {t} outside the family domain [{a}, {b}]"
            )));
        }
        if mu.len() != self.d {
            return Err(Error::Domain(format!(
                "got {} mu values, family has {} gap parameters",
                mu.len(),
                self.d
            )));
        }
        Ok(())
    }

    /// Evaluate `A_mu(t)`. The result is Hermitian by construction: the
    /// upper triangle is evaluated and mirrored, so rounding cannot break
    /// the symmetry the coefficients guarantee.
    pub fn evaluate(&self, t: f64, mu: &[f64]) -> Result<HermitianMatrix> {
        self.check_args(t, mu)?;
        Ok(self.eval_table(&self.entries, t, mu))
    }

    /// Evaluate the analytic t-derivative `A_mu'(t)`.
    pub fn evaluate_dt(&self, t: f64, mu: &[f64]) -> Result<HermitianMatrix> {
        self.check_args(t, mu)?;
        Ok(self.eval_table(&self.entries_dt, t, mu))
    }

    fn eval_table(&self, table: &[Polynomial], t: f64, mu: &[f64]) -> HermitianMatrix {
        let n = self.n;
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(table[i * n + i].eval(t, mu).re, 0.0);
            for j in (i + 1)..n {
                let v = table[i * n + j].eval(t, mu);
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        HermitianMatrix::new(m).expect("coefficient-level symmetry guarantees hermiticity")
    }
}

fn coeffs_match(a: &[(Vec<u32>, C64)], b: &[(Vec<u32>, C64)]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    a.iter().zip(b.iter()).all(|((pa, ca), (pb, cb))| {
        pa == pb && (ca - cb).norm() <= 1e-14 * ca.norm().max(1.0)
    })
}

/// Construct one of the built-in families by name.
///
/// Supported names: `paper_example`, `linear_lz`, `three_level_chain`.
pub fn builtin_family(name: &str) -> Result<HamiltonianFamily> {
    // Helper for real monomials in (t, mu) with d = 1.
    let mono = |p_t: u32, p_mu: u32, c: f64| Monomial {
        powers: vec![p_t, p_mu],
        coeff: C64::new(c, 0.0),
    };
    match name {
        "paper_example" => HamiltonianFamily::new(
            name,
            2,
            1,
            (-3.0, 3.0),
            vec![
                (0, 0, Polynomial::new(vec![mono(2, 0, 1.0)], 1)?),
                (0, 1, Polynomial::new(vec![mono(0, 1, 1.0)], 1)?),
                (1, 1, Polynomial::new(vec![mono(0, 0, 2.0), mono(2, 0, -1.0)], 1)?),
            ],
        ),
        "linear_lz" => HamiltonianFamily::new(
            name,
            2,
            1,
            (-5.0, 5.0),
            vec![
                (0, 0, Polynomial::new(vec![mono(1, 0, 1.0)], 1)?),
                (0, 1, Polynomial::new(vec![mono(0, 1, 1.0)], 1)?),
                (1, 1, Polynomial::new(vec![mono(1, 0, -1.0)], 1)?),
            ],
        ),
        // Diagonal branches t, -t, 2 - t^2 cross pairwise at t = 0 (lower
        // pair) and t = 1 (upper pair) inside [-0.5, 1.5]; every off-diagonal
        // position carries the same coupling mu so both crossings open at
        // first order in mu.
        "three_level_chain" => HamiltonianFamily::new(
            name,
            3,
            1,
            (-0.5, 1.5),
            vec![
                (0, 0, Polynomial::new(vec![mono(1, 0, 1.0)], 1)?),
                (1, 1, Polynomial::new(vec![mono(1, 0, -1.0)], 1)?),
                (2, 2, Polynomial::new(vec![mono(0, 0, 2.0), mono(2, 0, -1.0)], 1)?),
                (0, 1, Polynomial::new(vec![mono(0, 1, 1.0)], 1)?),
                (0, 2, Polynomial::new(vec![mono(0, 1, 1.0)], 1)?),
                (1, 2, Polynomial::new(vec![mono(0, 1, 1.0)], 1)?),
            ],
        ),
        other => Err(Error::Config(format!(
            "unknown built-in family '{other}' (expected paper_example, linear_lz, or three_level_chain)"
        ))),
    }
}
