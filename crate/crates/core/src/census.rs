//! Cospectrality census over free trees.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::charpoly::{compute_psi, compute_psi_hat, compute_psi_tilde};
use crate::error::{Error, Result};
use crate::tree::{canonical_code, enumerate_trees, CodeMode, EnumerationMode, ShapeCode};

pub const CENSUS_BOUND: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct CensusLevel {
    pub p: usize,
    pub trees: usize,
    /// Distinct Neumann fingerprints.
    pub classes: usize,
    /// Groups of non-isomorphic trees sharing a fingerprint.
    pub collisions: Vec<Vec<ShapeCode>>,
    /// Collisions that survive once every rooted Dirichlet polynomial is
    /// added to the fingerprint.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_spectra_collisions: Option<Vec<Vec<ShapeCode>>>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub p_min: usize,
    pub p_max: usize,
    pub levels: Vec<CensusLevel>,
}

impl CensusReport {
    pub fn total_collisions(&self) -> usize {
        self.levels.iter().map(|l| l.collisions.len()).sum()
    }

    pub fn elapsed(&self) -> Duration {
        self.levels.iter().map(|l| l.elapsed).sum()
    }
}

fn collisions<K: Ord>(groups: BTreeMap<K, Vec<ShapeCode>>) -> (usize, Vec<Vec<ShapeCode>>) {
    let classes = groups.len();
    let mut out: Vec<Vec<ShapeCode>> = groups
        .into_values()
        .filter(|g| g.len() >= 2)
        .map(|mut g| {
            g.sort();
            g
        })
        .collect();
    out.sort();
    (classes, out)
}

/// Groups all free trees with `1..=p_max` vertices by their canonical
/// `psi_tilde`; with `two_spectra`, also by the multiset of `psi_hat` over
/// every choice of root.
pub fn census(p_max: usize, two_spectra: bool) -> Result<CensusReport> {
    if p_max > CENSUS_BOUND {
        return Err(Error::BoundExceeded {
            what: "p_max",
            value: p_max,
            bound: CENSUS_BOUND,
        });
    }
    let mut levels = Vec::new();
    for p in 1..=p_max {
        let start = Instant::now();
        let trees = enumerate_trees(p, EnumerationMode::Free)?;
        let mut neumann: BTreeMap<String, Vec<ShapeCode>> = BTreeMap::new();
        let mut both: BTreeMap<(String, Vec<String>), Vec<ShapeCode>> = BTreeMap::new();
        for t in &trees {
            let code = canonical_code(t, CodeMode::Unrooted);
            let key = if p < 2 {
                String::new()
            } else {
                compute_psi_tilde(&compute_psi(t))?.canonical().to_string()
            };
            if two_spectra {
                let mut hats = Vec::with_capacity(p);
                if p >= 2 {
                    for v in 0..p {
                        hats.push(compute_psi_hat(&t.reroot(v)?)?.canonical().to_string());
                    }
                }
                hats.sort();
                both.entry((key.clone(), hats))
                    .or_default()
                    .push(code.clone());
            }
            neumann.entry(key).or_default().push(code);
        }
        let (classes, collisions_n) = collisions(neumann);
        levels.push(CensusLevel {
            p,
            trees: trees.len(),
            classes,
            collisions: collisions_n,
            two_spectra_collisions: two_spectra.then(|| collisions(both).1),
            elapsed: start.elapsed(),
        });
    }
    Ok(CensusReport {
        p_min: 1,
        p_max,
        levels,
    })
}
