//! Zero-potential Neumann and Dirichlet spectra, and the way back from them
//! to the ratio `R`.
//!
//! With `q = 0` the characteristic functions are `sin(mu l) psi_tilde(cos(mu l))`
//! (Neumann) and `psi_hat(cos(mu l))` (Dirichlet), `lambda = mu^2`. Each root
//! `a` of the polynomial contributes the lattices `+-arccos(a) + 2 pi k`, so
//! the phases `mu l mod 2 pi` of a long enough spectrum give the roots back.

use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::charpoly::{compute_psi, compute_psi_hat, compute_psi_tilde};
use crate::error::{Error, Result};
use crate::invert::{filter_by_polynomials, invert_ratio, CandidateShape};
use crate::poly::{rat, Poly};
use crate::ratfunc::RationalFunction;
use crate::roots::{default_precision, isolate_real_roots, snap_to_rational};
use crate::tree::RootedTree;

pub const DEFAULT_PERIODS: usize = 25;
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000;
pub const DEFAULT_COEFF_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Neumann,
    Dirichlet,
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "neumann" => Ok(Problem::Neumann),
            "dirichlet" => Ok(Problem::Dirichlet),
            other => Err(Error::Parse(format!("unknown problem {other:?}"))),
        }
    }
}

/// Potentials the synthesizer accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Potential {
    #[default]
    Zero,
}

impl FromStr for Potential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" | "0" => Ok(Potential::Zero),
            other => Err(Error::UnsupportedPotential(format!(
                "{other:?}; only the zero potential is supported"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub l: f64,
    pub problem: Problem,
    pub eigenvalues: Vec<Eigenvalue>,
}

impl Spectrum {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: Spectrum =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("spectrum JSON: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l.is_finite() && self.l > 0.0) {
            return Err(Error::Parse(format!(
                "edge length {} must be positive",
                self.l
            )));
        }
        for (i, e) in self.eigenvalues.iter().enumerate() {
            if !e.value.is_finite() || e.value < 0.0 || e.multiplicity == 0 {
                return Err(Error::Parse(format!("bad eigenvalue entry {i}")));
            }
            if i > 0 && self.eigenvalues[i - 1].value >= e.value {
                return Err(Error::Parse(
                    "eigenvalues must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }

    /// `(mu l, multiplicity)` for every positive eigenvalue.
    fn scaled_roots(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.eigenvalues
            .iter()
            .filter(|e| e.value > 0.0)
            .map(|e| (e.value.sqrt() * self.l, e.multiplicity))
    }

    /// Number of `2 pi` windows of `mu l` the spectrum covers.
    pub fn periods(&self, tol: f64) -> usize {
        let top = self.scaled_roots().map(|(x, _)| x).fold(0.0, f64::max);
        (top / TAU - tol).ceil().max(0.0) as usize
    }

    /// Eigenvalue counts (with multiplicity) in each window
    /// `mu l in (2 pi k, 2 pi (k + 1)]`.
    pub fn per_period_counts(&self, tol: f64) -> Vec<usize> {
        let mut counts = vec![0; self.periods(tol)];
        for (x, m) in self.scaled_roots() {
            let k = ((x - tol) / TAU).floor().max(0.0) as usize;
            if k < counts.len() {
                counts[k] += m;
            }
        }
        counts
    }
}

/// Real roots of `p` with multiplicities, as floats.
fn polynomial_roots(p: &Poly) -> Vec<(f64, usize)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    isolate_real_roots(p, Some((rat(-1), rat(1))), &default_precision())
        .roots
        .iter()
        .map(|r| (r.approx(), r.multiplicity))
        .collect()
}

fn merge_sorted(mut xs: Vec<(f64, usize)>) -> Vec<(f64, usize)> {
    xs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, usize)> = Vec::with_capacity(xs.len());
    for (x, m) in xs {
        match out.last_mut() {
            Some((y, n)) if (x - *y).abs() <= 1e-12 * x.abs().max(1.0) => *n += m,
            _ => out.push((x, m)),
        }
    }
    out
}

/// Eigenvalues with `mu l in (0, 2 pi periods]` (plus `lambda = 0` for
/// Neumann).
pub fn synthesize_spectrum(
    t: &RootedTree,
    problem: Problem,
    l: f64,
    periods: usize,
) -> Result<Spectrum> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::Inconsistent(format!(
            "edge length {l} must be positive"
        )));
    }
    if periods == 0 {
        return Err(Error::Inconsistent(
            "at least one period is required".into(),
        ));
    }
    let (roots, lattice) = match problem {
        Problem::Neumann => {
            if t.p() < 2 {
                return Err(Error::NoEdges);
            }
            (polynomial_roots(&compute_psi_tilde(&compute_psi(t))?), true)
        }
        Problem::Dirichlet => (polynomial_roots(&compute_psi_hat(t)?), false),
    };
    let mut xs = Vec::new();
    if lattice {
        xs.extend((1..=2 * periods).map(|k| (k as f64 * PI, 1)));
    }
    for &(a, m) in &roots {
        let theta = a.clamp(-1.0, 1.0).acos();
        for k in 0..periods {
            let base = TAU * k as f64;
            xs.push((base + theta, m));
            xs.push((base + TAU - theta, m));
        }
    }
    let mut eigenvalues: Vec<Eigenvalue> = merge_sorted(xs)
        .into_iter()
        .map(|(x, m)| Eigenvalue {
            value: (x / l).powi(2),
            multiplicity: m,
        })
        .collect();
    if lattice {
        eigenvalues.insert(
            0,
            Eigenvalue {
                value: 0.0,
                multiplicity: 1,
            },
        );
    }
    Ok(Spectrum {
        l,
        problem,
        eigenvalues,
    })
}

/// Limit constants `c` in `[-1, 1]` with multiplicities, ascending.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ConstantMultiset {
    pub entries: Vec<(f64, usize)>,
}

impl ConstantMultiset {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn multiplicity_near(&self, c: f64, tol: f64) -> usize {
        self.entries
            .iter()
            .filter(|e| (e.0 - c).abs() <= tol)
            .map(|e| e.1)
            .sum()
    }

    /// Each value repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|&(c, m)| std::iter::repeat_n(c, m))
            .collect()
    }

    /// Monic `prod (z - c)` with coefficients snapped to rationals.
    pub fn monic_polynomial(&self, max_den: u64, tol: f64) -> Result<Poly> {
        // ascending coefficients of prod (z - c)
        let mut coeffs = vec![1.0f64];
        for c in self.expanded() {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= c * a;
            }
            coeffs = next;
        }
        let snapped = coeffs
            .iter()
            .map(|&a| snap_to_rational(a, max_den, tol))
            .collect::<Result<Vec<BigRational>>>()
            .map_err(|e| Error::InsufficientPrecision(e.to_string()))?;
        Ok(Poly::new(snapped))
    }
}

struct Cluster {
    phase: f64,
    count: usize,
}

/// Recovers the constants from the phases of a spectrum, skipping the first
/// period.
pub fn extract_constants(s: &Spectrum, tol: f64) -> Result<ConstantMultiset> {
    let periods = s.periods(tol);
    if periods < 3 {
        return Err(Error::InsufficientPrecision(format!(
            "spectrum covers {periods} periods, at least 3 are needed"
        )));
    }
    let used = periods - 1;
    let mut phases: Vec<(f64, usize)> = s
        .scaled_roots()
        .filter(|&(x, _)| x > TAU + tol && x <= TAU * periods as f64 + tol)
        .map(|(x, m)| {
            let ph = x.rem_euclid(TAU);
            (if ph > TAU - tol { 0.0 } else { ph }, m)
        })
        .collect();
    phases.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut clusters: Vec<Cluster> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for (ph, m) in phases {
        match clusters.last_mut() {
            Some(c) if ph - last <= tol => {
                c.phase += (ph - c.phase) * m as f64 / (c.count + m) as f64;
                c.count += m;
            }
            _ => clusters.push(Cluster {
                phase: ph,
                count: m,
            }),
        }
        last = ph;
    }

    let mut per_period = Vec::with_capacity(clusters.len());
    for c in &clusters {
        if c.count % used != 0 {
            return Err(Error::NotEquilateral(format!(
                "phase {:.9} occurs {} times over {used} periods",
                c.phase, c.count
            )));
        }
        per_period.push((c.phase, c.count / used));
    }

    let mut entries = Vec::new();
    let mut consumed = vec![false; per_period.len()];
    for i in 0..per_period.len() {
        if consumed[i] {
            continue;
        }
        let (ph, m) = per_period[i];
        consumed[i] = true;
        if ph.abs() <= tol {
            entries.push((1.0, m));
        } else if (ph - PI).abs() <= tol {
            entries.push((-1.0, m));
        } else if ph < PI {
            let mirror = TAU - ph;
            let j = (0..per_period.len())
                .find(|&j| !consumed[j] && (per_period[j].0 - mirror).abs() <= 2.0 * tol)
                .ok_or_else(|| {
                    Error::NotEquilateral(format!("phase {ph:.9} has no mirror {mirror:.9}"))
                })?;
            if per_period[j].1 != m {
                return Err(Error::NotEquilateral(format!(
                    "phases {ph:.9} and {mirror:.9} have multiplicities {m} and {}",
                    per_period[j].1
                )));
            }
            consumed[j] = true;
            // average the pair: theta and 2 pi - theta
            let theta = 0.5 * (ph + TAU - per_period[j].0);
            let c = theta.cos();
            // cos(pi/2) and friends land a few ulps off zero
            entries.push((if c.abs() < 1e-12 { 0.0 } else { c }, m));
        } else {
            return Err(Error::NotEquilateral(format!("unpaired phase {ph:.9}")));
        }
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(ConstantMultiset { entries })
}

/// Vertex count from the Neumann constants.
pub fn infer_p(alphas: &ConstantMultiset) -> Result<usize> {
    let tol = 1e-9;
    let plus = alphas.multiplicity_near(1.0, tol);
    let minus = alphas.multiplicity_near(-1.0, tol);
    if plus != 1 || minus != 1 {
        return Err(Error::NotEquilateral(format!(
            "+1 and -1 must each occur once, found {plus} and {minus}"
        )));
    }
    Ok(alphas.total_multiplicity())
}

/// `R = d0 prod (-z + alpha) / prod (-z + beta)`, reduced.
pub fn build_ratio(
    alphas: &ConstantMultiset,
    betas: &ConstantMultiset,
    d0: usize,
) -> Result<RationalFunction> {
    build_ratio_with(
        alphas,
        betas,
        d0,
        DEFAULT_MAX_DENOMINATOR,
        DEFAULT_COEFF_TOL,
    )
}

pub fn build_ratio_with(
    alphas: &ConstantMultiset,
    betas: &ConstantMultiset,
    d0: usize,
    max_den: u64,
    tol: f64,
) -> Result<RationalFunction> {
    let p = alphas.total_multiplicity();
    if betas.total_multiplicity() + 1 != p {
        return Err(Error::Inconsistent(format!(
            "{p} Neumann constants need {} Dirichlet constants, found {}",
            p.saturating_sub(1),
            betas.total_multiplicity()
        )));
    }
    if d0 == 0 {
        return Err(Error::Inconsistent("root degree must be positive".into()));
    }
    let num = alphas.monic_polynomial(max_den, tol)?;
    let den = betas.monic_polynomial(max_den, tol)?;
    // (-1)^p / (-1)^(p-1) = -1
    RationalFunction::new(num.scale(&-rat(d0 as i64)), den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum D0Choice {
    Given(usize),
    Search,
}

#[derive(Debug, Clone)]
pub struct SpectralRecovery {
    pub d0: usize,
    pub ratio: RationalFunction,
    /// Shapes whose reduced ratio matches, before the polynomial check.
    pub ratio_matches: usize,
    /// Shapes whose `psi` and `psi_hat` both match the spectra.
    pub candidates: Vec<CandidateShape>,
}

#[derive(Debug, Clone)]
pub struct RecoveryReport {
    pub p: usize,
    pub alphas: ConstantMultiset,
    pub betas: ConstantMultiset,
    /// One entry per root degree tried; with a search only consistent ones.
    pub results: Vec<SpectralRecovery>,
}

fn recover_with_d0(
    alphas: &ConstantMultiset,
    betas: &ConstantMultiset,
    d0: usize,
    p: usize,
) -> Result<SpectralRecovery> {
    let ratio = build_ratio(alphas, betas, d0)?;
    let matches = invert_ratio(&ratio, d0, p)?;
    let ratio_matches = matches.len();
    let psi = alphas.monic_polynomial(DEFAULT_MAX_DENOMINATOR, DEFAULT_COEFF_TOL)?;
    let psi_hat = betas.monic_polynomial(DEFAULT_MAX_DENOMINATOR, DEFAULT_COEFF_TOL)?;
    Ok(SpectralRecovery {
        d0,
        ratio,
        ratio_matches,
        candidates: filter_by_polynomials(matches, &psi, &psi_hat)?,
    })
}

pub fn recover_shape_from_spectra(
    neumann: &Spectrum,
    dirichlet: &Spectrum,
    d0: D0Choice,
    tol: f64,
) -> Result<RecoveryReport> {
    if neumann.problem != Problem::Neumann || dirichlet.problem != Problem::Dirichlet {
        return Err(Error::Inconsistent(
            "expected one Neumann and one Dirichlet spectrum".into(),
        ));
    }
    if (neumann.l - dirichlet.l).abs() > 1e-12 * neumann.l.max(1.0) {
        return Err(Error::Inconsistent(format!(
            "edge lengths differ: {} and {}",
            neumann.l, dirichlet.l
        )));
    }
    let alphas = extract_constants(neumann, tol)?;
    let betas = extract_constants(dirichlet, tol)?;
    let p = infer_p(&alphas)?;
    let results = match d0 {
        D0Choice::Given(d) => vec![recover_with_d0(&alphas, &betas, d, p)?],
        D0Choice::Search => {
            let mut out = Vec::new();
            for d in 1..p {
                let r = recover_with_d0(&alphas, &betas, d, p)?;
                if !r.candidates.is_empty() {
                    out.push(r);
                }
            }
            out
        }
    };
    Ok(RecoveryReport {
        p,
        alphas,
        betas,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn values(s: &Spectrum) -> Vec<(f64, usize)> {
        s.eigenvalues
            .iter()
            .map(|e| (e.value, e.multiplicity))
            .collect()
    }

    fn close(a: &[(f64, usize)], b: &[(f64, usize)]) -> bool {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| x.1 == y.1 && (x.0 - y.0).abs() < 1e-9 * y.0.max(1.0))
    }

    #[test]
    fn p2_neumann() {
        let t = RootedTree::path(2, 0).unwrap();
        let s = synthesize_spectrum(&t, Problem::Neumann, 1.0, 2).unwrap();
        let expected: Vec<(f64, usize)> = (0..5).map(|k| ((k as f64 * PI).powi(2), 1)).collect();
        assert!(close(&values(&s), &expected));
    }

    #[test]
    fn star_spectra() {
        let t = RootedTree::star(3, 0).unwrap();
        let d = synthesize_spectrum(&t, Problem::Dirichlet, 1.0, 1).unwrap();
        assert!(close(
            &values(&d),
            &[((PI / 2.0).powi(2), 3), ((1.5 * PI).powi(2), 3)]
        ));
        let n = synthesize_spectrum(&t, Problem::Neumann, 1.0, 1).unwrap();
        assert!(close(
            &values(&n),
            &[
                (0.0, 1),
                ((PI / 2.0).powi(2), 2),
                (PI.powi(2), 1),
                ((1.5 * PI).powi(2), 2),
                ((2.0 * PI).powi(2), 1)
            ]
        ));
    }

    #[test]
    fn star_constants_and_ratio() {
        let t = RootedTree::star(3, 0).unwrap();
        let n = synthesize_spectrum(&t, Problem::Neumann, 1.0, 5).unwrap();
        let d = synthesize_spectrum(&t, Problem::Dirichlet, 1.0, 5).unwrap();
        let a = extract_constants(&n, DEFAULT_CLUSTER_TOL).unwrap();
        let b = extract_constants(&d, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(a.entries.len(), 3);
        assert_eq!(a.multiplicity_near(0.0, 1e-9), 2);
        assert_eq!(b.multiplicity_near(0.0, 1e-9), 3);
        assert_eq!(infer_p(&a).unwrap(), 4);
        let r = build_ratio(&a, &b, 3).unwrap();
        let expected =
            RationalFunction::new(parse_poly("-3z^2+3").unwrap(), parse_poly("z").unwrap())
                .unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn p2_constants() {
        let t = RootedTree::path(2, 0).unwrap();
        let n = synthesize_spectrum(&t, Problem::Neumann, 2.0, 4).unwrap();
        let a = extract_constants(&n, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(a.entries, vec![(-1.0, 1), (1.0, 1)]);
        assert_eq!(infer_p(&a).unwrap(), 2);
    }

    #[test]
    fn too_few_periods() {
        let t = RootedTree::path(2, 0).unwrap();
        let n = synthesize_spectrum(&t, Problem::Neumann, 1.0, 2).unwrap();
        assert!(matches!(
            extract_constants(&n, DEFAULT_CLUSTER_TOL),
            Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn unsupported_potential() {
        assert!(matches!(
            "x^2".parse::<Potential>(),
            Err(Error::UnsupportedPotential(_))
        ));
        assert_eq!("zero".parse::<Potential>().unwrap(), Potential::Zero);
    }

    #[test]
    fn spectrum_json_round_trip() {
        let t = RootedTree::path(3, 1).unwrap();
        let s = synthesize_spectrum(&t, Problem::Dirichlet, 1.0, 2).unwrap();
        let back = Spectrum::from_json_str(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(Spectrum::from_json_str("{\"l\": 1}").is_err());
    }
}
