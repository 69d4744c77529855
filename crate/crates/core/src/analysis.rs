//! Witness-size bound checks and scaling scans.
//!
//! Bounds checked per input:
//!
//! | program | side     | witness           | bound          |
//! |---------|----------|-------------------|----------------|
//! | P1      | positive | optimal           | 2              |
//! | P1      | positive | averaged cycle    | (d + 1) / d    |
//! | P1      | negative | optimal, propagated | n + n^3      |
//! | P2      | positive | optimal           | n^2            |
//! | P2      | positive | shortest paths    | n (n - 1)      |
//! | P2      | negative | optimal, per component | n         |
//!
//! Each check also compares the optimal witness against the constructed one.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{
    build_p1, build_p2, paper_negative_witness_p1, paper_negative_witness_p2,
    paper_positive_witness_p1, paper_positive_witness_p2, ConstructionError, GraphProgram,
    P2Seeding,
};
use crate::graphs::{
    components, find_odd_cycle, generate, random_permutation, Graph, GraphError, GraphFamily,
};
use crate::numeric::{int, ratio, to_f64, Rational};
use crate::span_program::{SideMax, SpanProgram, SpanProgramError};

/// Maximum acceptable log-log slope of the combined witness size.
pub const SLOPE_LIMIT: f64 = 1.5 + 0.15;

/// Smallest n entering the slope fit.
pub const SLOPE_FIT_MIN_N: usize = 5;

/// Largest n scanned by default.
pub const DEFAULT_MAX_N: usize = 15;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    SpanProgram(#[from] SpanProgramError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("family {family} produced no {side} inputs at n={n}")]
    MissingClass {
        family: String,
        side: Side,
        n: usize,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("optimal witness missing for a {side} input")]
    MissingWitness { side: Side },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProgramTag {
    P1,
    P2,
    St,
}

impl fmt::Display for ProgramTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProgramTag::P1 => "p1",
            ProgramTag::P2 => "p2",
            ProgramTag::St => "st",
        })
    }
}

impl FromStr for ProgramTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(ProgramTag::P1),
            "p2" => Ok(ProgramTag::P2),
            "st" => Ok(ProgramTag::St),
            other => Err(format!("unknown program {other:?} (expected p1, p2 or st)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Positive,
    Negative,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Positive => "positive",
            Side::Negative => "negative",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Optimal,
    PaperConstructed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Optimal => "optimal",
            Provenance::PaperConstructed => "paper-constructed",
        })
    }
}

/// Serializes a [`Rational`] as `"p/q"` (or `"p"` for integers).
pub mod rational_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::numeric::Rational;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse()
            .map_err(|_| D::Error::custom(format!("bad rational {text:?}")))
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub program: ProgramTag,
    pub n: usize,
    pub input: String,
    pub side: Side,
    pub provenance: Provenance,
    #[serde(with = "rational_string")]
    pub computed: Rational,
    pub computed_float: f64,
    #[serde(with = "rational_string")]
    pub bound: Rational,
    pub bound_float: f64,
    /// Human-readable source of `bound`.
    pub bound_formula: String,
    pub pass: bool,
}

impl BoundReport {
    fn new(
        program: ProgramTag,
        g: &Graph,
        side: Side,
        provenance: Provenance,
        computed: Rational,
        bound: Rational,
        bound_formula: impl Into<String>,
    ) -> Self {
        Self {
            program,
            n: g.n(),
            input: describe(g),
            side,
            provenance,
            computed_float: round_sig(to_f64(&computed)),
            bound_float: round_sig(to_f64(&bound)),
            pass: computed <= bound,
            computed,
            bound,
            bound_formula: bound_formula.into(),
        }
    }

    pub fn with_input(mut self, label: impl Into<String>) -> Self {
        self.input = label.into();
        self
    }
}

/// Compact graph label `n=4:1-2,2-3`.
pub fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("n={}:{}", g.n(), edges.join(","))
}

fn n_int(g: &Graph) -> i64 {
    g.n() as i64
}

/// Bound reports for the odd-cycle program on `g`.
pub fn verify_bounds_p1(g: &Graph) -> Result<Vec<BoundReport>, AnalysisError> {
    let p1 = build_p1(g.n())?;
    let x = g.to_input();
    let tag = ProgramTag::P1;
    let mut out = Vec::new();
    if let Some(cycle) = find_odd_cycle(g) {
        let optimal = p1
            .program()
            .positive_witness(&x)?
            .ok_or(AnalysisError::MissingWitness {
                side: Side::Positive,
            })?;
        let constructed = paper_positive_witness_p1(&p1, g, &cycle)?;
        let d = cycle.len() as i64;
        out.push(BoundReport::new(
            tag,
            g,
            Side::Positive,
            Provenance::Optimal,
            optimal.size.clone(),
            int(2),
            "2",
        ));
        out.push(BoundReport::new(
            tag,
            g,
            Side::Positive,
            Provenance::PaperConstructed,
            constructed.size.clone(),
            ratio(d + 1, d),
            format!("(d+1)/d, d={d}"),
        ));
        out.push(BoundReport::new(
            tag,
            g,
            Side::Positive,
            Provenance::Optimal,
            optimal.size,
            constructed.size,
            "constructed witness size",
        ));
    } else {
        let optimal = p1
            .program()
            .negative_witness(&x)?
            .ok_or(AnalysisError::MissingWitness {
                side: Side::Negative,
            })?;
        let constructed = paper_negative_witness_p1(&p1, g)?;
        let n = n_int(g);
        let bound = int(n + n * n * n);
        out.push(BoundReport::new(
            tag,
            g,
            Side::Negative,
            Provenance::Optimal,
            optimal.size.clone(),
            bound.clone(),
            "n+n^3",
        ));
        out.push(BoundReport::new(
            tag,
            g,
            Side::Negative,
            Provenance::PaperConstructed,
            constructed.size.clone(),
            bound,
            "n+n^3",
        ));
        out.push(BoundReport::new(
            tag,
            g,
            Side::Negative,
            Provenance::Optimal,
            optimal.size,
            constructed.size,
            "constructed witness size",
        ));
    }
    Ok(out)
}

/// Bound reports for the connectivity program on `g` (`n >= 2`).
pub fn verify_bounds_p2(g: &Graph) -> Result<Vec<BoundReport>, AnalysisError> {
    let p2 = build_p2(g.n())?;
    let x = g.to_input();
    let tag = ProgramTag::P2;
    let n = n_int(g);
    let mut out = Vec::new();
    let info = components(g);
    if info.count() == 1 {
        let optimal = p2
            .program()
            .positive_witness(&x)?
            .ok_or(AnalysisError::MissingWitness {
                side: Side::Positive,
            })?;
        let constructed = paper_positive_witness_p2(&p2, g)?;
        out.push(BoundReport::new(
            tag,
            g,
            Side::Positive,
            Provenance::Optimal,
            optimal.size.clone(),
            int(n * n),
            "n^2",
        ));
        out.push(BoundReport::new(
            tag,
            g,
            Side::Positive,
            Provenance::PaperConstructed,
            constructed.size.clone(),
            int(n * (n - 1)),
            "n(n-1)",
        ));
        out.push(BoundReport::new(
            tag,
            g,
            Side::Positive,
            Provenance::Optimal,
            optimal.size,
            constructed.size,
            "constructed witness size",
        ));
    } else {
        let optimal = p2
            .program()
            .negative_witness(&x)?
            .ok_or(AnalysisError::MissingWitness {
                side: Side::Negative,
            })?;
        let mut sizes = Vec::new();
        for v in info.representatives() {
            if !info.same(1, v) {
                sizes.push(paper_negative_witness_p2(&p2, g, v, P2Seeding::Component)?.size);
            }
        }
        let largest = sizes
            .iter()
            .max()
            .cloned()
            .expect("a component misses vertex 1");
        let smallest = sizes
            .iter()
            .min()
            .cloned()
            .expect("a component misses vertex 1");
        out.push(BoundReport::new(
            tag,
            g,
            Side::Negative,
            Provenance::Optimal,
            optimal.size.clone(),
            int(n),
            "n",
        ));
        out.push(BoundReport::new(
            tag,
            g,
            Side::Negative,
            Provenance::PaperConstructed,
            largest,
            int(n),
            "n (largest over components without vertex 1)",
        ));
        out.push(BoundReport::new(
            tag,
            g,
            Side::Negative,
            Provenance::Optimal,
            optimal.size,
            smallest,
            "constructed witness size",
        ));
    }
    Ok(out)
}

/// Input families for [`scaling_scan`]. Each sample is relabeled by a random permutation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanFamily {
    /// Largest odd cycle, largest even cycle (n >= 4) and the Hamiltonian path, padded with isolated vertices.
    Cycles,
    /// The path `1-2-...-n` and the same path with one random edge removed.
    PathSplit,
    /// `G(n, p)` samples.
    Gnp { p: f64 },
}

impl fmt::Display for ScanFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanFamily::Cycles => f.write_str("cycles"),
            ScanFamily::PathSplit => f.write_str("path-split"),
            ScanFamily::Gnp { p } => write!(f, "gnp(p={p})"),
        }
    }
}

impl ScanFamily {
    fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Graph>, GraphError> {
        let base = match *self {
            ScanFamily::Cycles => {
                let mut graphs = Vec::new();
                let odd = if n % 2 == 1 { n } else { n - 1 };
                if odd >= 3 {
                    graphs.push(generate(&GraphFamily::Cycle { len: odd, n }, 0)?);
                }
                let even = n - n % 2;
                if even >= 4 {
                    graphs.push(generate(&GraphFamily::Cycle { len: even, n }, 0)?);
                }
                graphs.push(generate(&GraphFamily::Path { n }, 0)?);
                graphs
            }
            ScanFamily::PathSplit => {
                let path = generate(&GraphFamily::Path { n }, 0)?;
                let mut split = path.clone();
                if n >= 2 {
                    let cut = rand::Rng::random_range(rng, 1..n);
                    split.remove_edge(cut, cut + 1)?;
                }
                vec![path, split]
            }
            ScanFamily::Gnp { p } => {
                let seed = rand::Rng::random(rng);
                vec![generate(&GraphFamily::RandomGnp { n, p }, seed)?]
            }
        };
        base.iter()
            .map(|g| g.relabel(&random_permutation(n, rng)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub positive_samples: usize,
    pub negative_samples: usize,
    #[serde(with = "rational_string")]
    pub wsize1: Rational,
    #[serde(with = "rational_string")]
    pub wsize0: Rational,
    /// `sqrt(wsize0 * wsize1)`.
    pub combined: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub program: ProgramTag,
    pub family: String,
    pub seed: u64,
    pub rows: Vec<ScalingRow>,
    /// OLS slope of `ln combined` against `ln n` over rows with `n >= 5`.
    pub slope: Option<f64>,
    pub slope_limit: f64,
    pub slope_pass: bool,
}

impl ScanTable {
    pub fn all_pass(&self) -> bool {
        self.slope_pass && self.rows.iter().all(|r| r.pass)
    }
}

/// Ordinary least-squares slope of `ln y` on `ln x`. `None` with fewer than two distinct `x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Squared bound curve: `2(n + n^3)` for P1, `n^3` for P2.
fn bound_squared(tag: ProgramTag, n: usize) -> BigInt {
    let n = BigInt::from(n);
    match tag {
        ProgramTag::P1 => BigInt::from(2) * (&n + &n * &n * &n),
        _ => &n * &n * &n,
    }
}

fn sample_seed(seed: u64, n: usize, sample: usize) -> u64 {
    seed ^ ((n as u64) << 32) ^ (sample as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Per-n combined witness size over sampled inputs, checked against the bound curve.
pub fn scaling_scan(
    tag: ProgramTag,
    family: ScanFamily,
    n_range: RangeInclusive<usize>,
    samples: usize,
    seed: u64,
) -> Result<ScanTable, AnalysisError> {
    if tag == ProgramTag::St {
        return Err(AnalysisError::Unsupported(
            "scan is defined for p1 and p2 only".into(),
        ));
    }
    if samples == 0 {
        return Err(AnalysisError::Unsupported(
            "samples per n must be positive".into(),
        ));
    }
    let min_n = if tag == ProgramTag::P1 { 1 } else { 2 };
    if *n_range.start() < min_n || n_range.is_empty() {
        return Err(AnalysisError::Unsupported(format!(
            "n range {}..{} invalid for {tag} (minimum n is {min_n})",
            n_range.start(),
            n_range.end()
        )));
    }

    let mut jobs: Vec<(usize, Graph)> = Vec::new();
    for n in n_range.clone() {
        for s in 0..samples {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, n, s));
            for g in family.sample(n, &mut rng)? {
                jobs.push((n, g));
            }
        }
    }

    let sizes: Vec<(usize, Side, Rational)> = jobs
        .par_iter()
        .map(|(n, g)| witness_size(tag, g).map(|(side, size)| (*n, side, size)))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    for n in n_range {
        let mut pos = SideMax::vacuous();
        let mut neg = SideMax::vacuous();
        let (mut pos_count, mut neg_count) = (0, 0);
        for (_, side, size) in sizes.iter().filter(|(m, _, _)| *m == n) {
            match side {
                Side::Positive => {
                    pos.observe(size);
                    pos_count += 1;
                }
                Side::Negative => {
                    neg.observe(size);
                    neg_count += 1;
                }
            }
        }
        for (side, m) in [(Side::Positive, &pos), (Side::Negative, &neg)] {
            if m.vacuous {
                return Err(AnalysisError::MissingClass {
                    family: family.to_string(),
                    side,
                    n,
                });
            }
        }
        let product = &pos.value * &neg.value;
        let bound_sq = bound_squared(tag, n);
        rows.push(ScalingRow {
            n,
            positive_samples: pos_count,
            negative_samples: neg_count,
            combined: round_sig(to_f64(&product).sqrt()),
            bound: round_sig(
                num_traits::ToPrimitive::to_f64(&bound_sq)
                    .unwrap_or(f64::NAN)
                    .sqrt(),
            ),
            pass: product <= Rational::from_integer(bound_sq),
            wsize1: pos.value,
            wsize0: neg.value,
        });
    }

    let fit: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= SLOPE_FIT_MIN_N)
        .map(|r| (r.n as f64, r.combined))
        .collect();
    let slope = loglog_slope(&fit).map(round_sig);
    Ok(ScanTable {
        program: tag,
        family: family.to_string(),
        seed,
        rows,
        slope,
        slope_limit: SLOPE_LIMIT,
        slope_pass: slope.is_none_or(|s| s <= SLOPE_LIMIT),
    })
}

/// Optimal witness size of `g` under the program for `tag`, with its side.
pub fn witness_size(tag: ProgramTag, g: &Graph) -> Result<(Side, Rational), AnalysisError> {
    let program: SpanProgram = match tag {
        ProgramTag::P1 => build_p1(g.n())?.into_program(),
        ProgramTag::P2 => build_p2(g.n())?.into_program(),
        ProgramTag::St => {
            return Err(AnalysisError::Unsupported(
                "st needs explicit endpoints".into(),
            ))
        }
    };
    let w = program.optimal_witness(&g.to_input())?;
    let side = if w.is_positive() {
        Side::Positive
    } else {
        Side::Negative
    };
    Ok((side, w.size().clone()))
}
