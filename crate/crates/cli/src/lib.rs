//! Subcommand implementations behind the `qtree` binary.
//!
//! Every command returns its stdout payload; errors carry the process exit
//! code (2 parse, 3 semantic, 4 resource bound).

use std::fmt;
use std::fs;
use std::io::Read;

use qtree_core::census::census;
use qtree_core::charpoly::{branched_fraction_string, compute_bundle};
use qtree_core::invert::{
    filter_by_polynomials, group_unrooted, invert_ratio_exhaustive, invert_ratio_with,
    root_degree_from_ratio, InvertOptions, DEFAULT_MAX_BRANCH,
};
use qtree_core::parse::{parse_poly_any, poly_from_json, poly_to_json};
use qtree_core::spectra::{
    recover_shape_from_spectra, synthesize_spectrum, D0Choice, Potential, Problem, Spectrum,
};
use qtree_core::tree::{enumerate_trees, CodeMode};
use qtree_core::{
    canonical_code, invert_snowflake, CandidateShape, EnumerationMode, Error, ErrorKind, Poly,
    RationalFunction, RootedTree,
};
use serde_json::{json, Value};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_BOUND: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    pub fn semantic(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_SEMANTIC,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Parse => EXIT_PARSE,
            ErrorKind::Semantic => EXIT_SEMANTIC,
            ErrorKind::Bound => EXIT_BOUND,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Reads a file, or stdin for `-`.
pub fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::parse(format!("{path}: {e}")))
    }
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn poly_value(p: &Poly) -> Value {
    json!({ "coeffs": poly_to_json(p), "text": p.to_string() })
}

fn ratio_values(r: &RationalFunction) -> (Value, Value) {
    (poly_value(r.num()), poly_value(r.den()))
}

pub fn tree_value(t: &RootedTree) -> Value {
    serde_json::to_value(t.to_json()).expect("tree JSON")
}

pub fn candidate_value(c: &CandidateShape) -> Value {
    let trace: Vec<Value> = c
        .trace
        .records
        .iter()
        .map(|r| {
            json!({
                "vertex": r.vertex,
                "depth": r.depth,
                "sign": r.sign,
                "degree": r.degree,
                "reciprocal_sum": r.reciprocal_sum.to_string(),
                "child_degrees": r.child_degrees,
            })
        })
        .collect();
    json!({
        "code": c.code,
        "tree": tree_value(&c.tree),
        "verified": c.verified,
        "branched_fraction": branched_fraction_string(&c.tree),
        "trace": trace,
    })
}

/// Forward polynomials of a tree given as JSON text.
pub fn cmd_forward(tree_json: &str) -> CliResult<Value> {
    let t = RootedTree::from_json_str(tree_json)?;
    let b = compute_bundle(&t)?;
    let (num, den) = ratio_values(&b.ratio);
    Ok(json!({
        "p": t.p(),
        "root": t.root(),
        "root_degree": t.degree(t.root()),
        "psi": poly_value(&b.psi),
        "psi_tilde": poly_value(&b.psi_tilde),
        "psi_hat": poly_value(&b.psi_hat),
        "ratio_num": num,
        "ratio_den": den,
        "branched_fraction": branched_fraction_string(&t),
    }))
}

/// Reads `ratio_num`/`ratio_den` back from `forward` output.
pub fn ratio_from_forward(forward_json: &str) -> CliResult<RationalFunction> {
    let v: Value = serde_json::from_str(forward_json)
        .map_err(|e| CliError::parse(format!("forward JSON: {e}")))?;
    let field = |name: &str| -> CliResult<Poly> {
        let coeffs = v
            .get(name)
            .and_then(|f| f.get("coeffs"))
            .ok_or_else(|| CliError::parse(format!("missing {name}.coeffs")))?;
        Ok(poly_from_json(coeffs)?)
    };
    Ok(RationalFunction::new(
        field("ratio_num")?,
        field("ratio_den")?,
    )?)
}

pub fn parse_ratio(num: &str, den: &str) -> CliResult<RationalFunction> {
    let num = parse_poly_any(num)?;
    let den = parse_poly_any(den)?;
    Ok(RationalFunction::new(num, den)?)
}

#[derive(Debug, Clone)]
pub struct InvertPolyArgs {
    pub ratio: RationalFunction,
    pub d0: Option<usize>,
    pub p_max: usize,
    pub all_roots: bool,
    pub exhaustive: bool,
    pub max_branch: usize,
    /// Unreduced `psi` and `psi_hat`; when given, only shapes matching both
    /// are kept.
    pub polynomials: Option<(Poly, Poly)>,
}

impl InvertPolyArgs {
    pub fn new(ratio: RationalFunction, d0: Option<usize>, p_max: usize) -> Self {
        InvertPolyArgs {
            ratio,
            d0,
            p_max,
            all_roots: false,
            exhaustive: false,
            max_branch: DEFAULT_MAX_BRANCH,
            polynomials: None,
        }
    }
}

pub struct InvertPolyOutput {
    pub d0: usize,
    pub complete: bool,
    /// Shapes with the given ratio, before any polynomial filter.
    pub ratio_matches: usize,
    pub candidates: Vec<CandidateShape>,
}

pub fn run_invert_poly(args: &InvertPolyArgs) -> CliResult<InvertPolyOutput> {
    if args.p_max < 2 {
        return Err(CliError::semantic("--pmax must be at least 2"));
    }
    let d0 = match args.d0 {
        Some(d) => d,
        None => root_degree_from_ratio(&args.ratio)?,
    };
    let (complete, candidates) = if args.exhaustive {
        (true, invert_ratio_exhaustive(&args.ratio, d0, args.p_max)?)
    } else {
        let opts = InvertOptions {
            p_max: args.p_max,
            max_branch_size: args.max_branch,
        };
        let inv = invert_ratio_with(&args.ratio, d0, &opts)?;
        (inv.complete, inv.candidates)
    };
    let ratio_matches = candidates.len();
    let candidates = match &args.polynomials {
        Some((psi, psi_hat)) => {
            if RationalFunction::new(psi.clone(), psi_hat.clone())? != args.ratio {
                return Err(CliError::semantic(
                    "psi / psi_hat does not reduce to the ratio",
                ));
            }
            filter_by_polynomials(candidates, psi, psi_hat)?
        }
        None => candidates,
    };
    Ok(InvertPolyOutput {
        d0,
        complete,
        ratio_matches,
        candidates,
    })
}

pub fn cmd_invert_poly(args: &InvertPolyArgs) -> CliResult<Value> {
    let out = run_invert_poly(args)?;
    let (num, den) = ratio_values(&args.ratio);
    let mut v = json!({
        "ratio_num": num,
        "ratio_den": den,
        "d0": out.d0,
        "p_max": args.p_max,
        "complete": out.complete,
        "count": out.candidates.len(),
    });
    if args.polynomials.is_some() {
        v["ratio_matches"] = json!(out.ratio_matches);
    }
    if out.candidates.is_empty() {
        v["message"] = json!(format!("no tree with <= {} vertices", args.p_max));
    }
    if args.all_roots {
        let groups: Vec<Value> = group_unrooted(&out.candidates)
            .into_iter()
            .map(|(code, members)| {
                json!({
                    "unrooted_code": code,
                    "rooted": members.iter().map(|c| candidate_value(c)).collect::<Vec<_>>(),
                })
            })
            .collect();
        v["groups"] = Value::Array(groups);
    } else {
        v["candidates"] = out.candidates.iter().map(candidate_value).collect();
    }
    Ok(v)
}

/// Human-readable expansion of each candidate.
pub fn invert_poly_trace(args: &InvertPolyArgs) -> CliResult<String> {
    let out = run_invert_poly(args)?;
    let mut s = format!("R(z) = {}\nroot degree {}\n", args.ratio, out.d0);
    if out.candidates.is_empty() {
        s.push_str(&format!("no tree with <= {} vertices\n", args.p_max));
    }
    for (i, c) in out.candidates.iter().enumerate() {
        s.push_str(&format!(
            "\ncandidate {} ({} vertices) {}\n  R = {}\n",
            i + 1,
            c.tree.p(),
            c.code,
            branched_fraction_string(&c.tree)
        ));
        for line in c.trace.to_string().lines() {
            s.push_str("  ");
            s.push_str(line);
            s.push('\n');
        }
    }
    if !out.complete {
        s.push_str("\nwarning: search horizon smaller than p_max - d0; result may be incomplete\n");
    }
    Ok(s)
}

pub fn cmd_spectra(
    tree_json: &str,
    problem: Problem,
    l: f64,
    periods: usize,
    potential: &str,
) -> CliResult<Value> {
    let Potential::Zero = potential.parse::<Potential>()?;
    let t = RootedTree::from_json_str(tree_json)?;
    let s = synthesize_spectrum(&t, problem, l, periods)?;
    Ok(serde_json::to_value(&s).expect("spectrum JSON"))
}

pub fn cmd_invert_spectra(
    neumann_json: &str,
    dirichlet_json: &str,
    d0: D0Choice,
    tol: f64,
) -> CliResult<Value> {
    let n = Spectrum::from_json_str(neumann_json)?;
    let d = Spectrum::from_json_str(dirichlet_json)?;
    let rep = recover_shape_from_spectra(&n, &d, d0, tol)?;
    let constants = |c: &qtree_core::spectra::ConstantMultiset| -> Value {
        c.entries
            .iter()
            .map(|&(v, m)| json!({ "value": v, "multiplicity": m }))
            .collect()
    };
    let results: Vec<Value> = rep
        .results
        .iter()
        .map(|r| {
            let (num, den) = ratio_values(&r.ratio);
            json!({
                "d0": r.d0,
                "ratio_num": num,
                "ratio_den": den,
                "ratio_matches": r.ratio_matches,
                "count": r.candidates.len(),
                "candidates": r.candidates.iter().map(candidate_value).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "p": rep.p,
        "alphas": constants(&rep.alphas),
        "betas": constants(&rep.betas),
        "results": results,
    }))
}

pub fn cmd_snowflake_invert(ratio: &RationalFunction, d0: Option<usize>) -> CliResult<Value> {
    let d0 = match d0 {
        Some(d) => d,
        None => root_degree_from_ratio(ratio)?,
    };
    let inv = invert_snowflake(ratio, d0)?;
    let factors: Vec<Value> = inv
        .factors
        .iter()
        .map(|(d, q, m)| json!({ "degree": d, "factor": q.to_string(), "multiplicity": m }))
        .collect();
    Ok(json!({
        "d0": d0,
        "arms": inv.arms,
        "factors": factors,
        "full_denominator": poly_value(&inv.full_denominator),
        "candidate": candidate_value(&inv.candidate),
    }))
}

/// Census JSON plus the elapsed wall time, which is kept out of the JSON.
pub fn cmd_census(p_max: usize, two_spectra: bool) -> CliResult<(Value, std::time::Duration)> {
    let report = census(p_max, two_spectra)?;
    let v = serde_json::to_value(&report).expect("census JSON");
    Ok((v, report.elapsed()))
}

pub fn cmd_enumerate(p: usize, mode: EnumerationMode) -> CliResult<Value> {
    let trees = enumerate_trees(p, mode)?;
    let code_mode = match mode {
        EnumerationMode::Rooted => CodeMode::Rooted,
        EnumerationMode::Free => CodeMode::Unrooted,
    };
    let mut items: Vec<(String, Value)> = trees
        .iter()
        .map(|t| (canonical_code(t, code_mode).0, tree_value(t)))
        .collect();
    items.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(json!({
        "p": p,
        "count": items.len(),
        "trees": items
            .into_iter()
            .map(|(code, tree)| json!({ "code": code, "tree": tree }))
            .collect::<Vec<_>>(),
    }))
}

pub fn cmd_dot_export(tree_json: &str) -> CliResult<String> {
    Ok(RootedTree::from_json_str(tree_json)?.to_dot())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P3_CENTER: &str = r#"{"p":3,"root":1,"edges":[[0,1],[1,2]]}"#;

    #[test]
    fn forward_p3() {
        let v = cmd_forward(P3_CENTER).unwrap();
        assert_eq!(v["psi"]["text"], "-2z^3+2z");
        assert_eq!(v["ratio_num"]["text"], "-2z^2+2");
        assert_eq!(v["ratio_den"]["text"], "z");
    }

    #[test]
    fn forward_round_trip() {
        let fwd = pretty(&cmd_forward(P3_CENTER).unwrap());
        let r = ratio_from_forward(&fwd).unwrap();
        let v = cmd_invert_poly(&InvertPolyArgs::new(r, None, 5)).unwrap();
        assert_eq!(v["count"], 1);
        assert_eq!(v["d0"], 2);
    }

    #[test]
    fn error_codes() {
        assert_eq!(cmd_forward("{nope").unwrap_err().code, EXIT_PARSE);
        let r = parse_ratio("-2z^2+2", "z").unwrap();
        let err = cmd_invert_poly(&InvertPolyArgs::new(r.clone(), Some(3), 5)).unwrap_err();
        assert_eq!(err.code, EXIT_SEMANTIC);
        let mut args = InvertPolyArgs::new(r, Some(2), 13);
        args.exhaustive = true;
        assert_eq!(cmd_invert_poly(&args).unwrap_err().code, EXIT_BOUND);
        assert_eq!(cmd_census(11, false).unwrap_err().code, EXIT_BOUND);
        assert_eq!(
            cmd_spectra(P3_CENTER, Problem::Neumann, 1.0, 2, "harmonic")
                .unwrap_err()
                .code,
            EXIT_SEMANTIC
        );
    }
}
