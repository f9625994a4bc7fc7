//! Batch analysis: per-involution verdicts, surveys, theorem verification and
//! pattern discovery. Classifier disagreements are reported as data.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bruhat::{build_ideal_from, even_shortcut_from_ideal, rs_from_ideal, OrbitIdeal};
use crate::determinantal::{jacobian_report, stable_codimension, JacobianReport};
use crate::error::{Error, Result};
use crate::field::{PrimeField, STABILITY_PRIMES};
use crate::pattern::{avoids, discover_minimal_bad, witnesses, DecoratedPattern, PatternList};
use crate::perm::{enumerate_involutions, Involution, RankMatrix};

/// Largest degree the batch commands accept.
pub const MAX_SURVEY_N: usize = 8;

#[derive(Clone, Debug)]
pub struct Options {
    pub badlist: PatternList,
    pub extras: PatternList,
    pub field: PrimeField,
    pub trials: usize,
    pub seed: u64,
    /// Run the Jacobian classifier (expensive for n = 8).
    pub jacobian: bool,
    pub threads: Option<usize>,
}

impl Options {
    pub fn new(badlist: PatternList, extras: PatternList) -> Self {
        Options {
            badlist,
            extras,
            field: PrimeField::default(),
            trials: 20,
            seed: 0,
            jacobian: false,
            threads: None,
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = self.threads {
            b = b.num_threads(t);
        }
        b.build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub pi: Involution,
    pub r_pi: usize,
    pub rs_graph: bool,
    pub rs_patterns: bool,
    pub rs_even_shortcut: Option<bool>,
    pub smooth_patterns: bool,
    pub smooth_jacobian: Option<bool>,
    pub w0_conjugate_degrees: BTreeMap<String, usize>,
    pub bad_pattern_witnesses: Vec<DecoratedPattern>,
    pub smoothness_witnesses: Vec<DecoratedPattern>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<JacobianReport>,
    pub disagreements: Vec<String>,
}

impl Verdict {
    pub fn consistent(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn all_with_ranks(n: usize) -> Result<Vec<(Involution, RankMatrix)>> {
    Ok(enumerate_involutions(n)?
        .map(|p| {
            let rm = p.rank_matrix();
            (p, rm)
        })
        .collect())
}

/// Runs every enabled classifier on `pi`.
pub fn analyze(pi: &Involution, opts: &Options) -> Result<Verdict> {
    if pi.n() > MAX_SURVEY_N {
        return Err(Error::Size {
            n: pi.n(),
            min: 1,
            max: MAX_SURVEY_N,
        });
    }
    let all = all_with_ranks(pi.n())?;
    analyze_in(pi, &build_ideal_from(pi, &all), opts)
}

fn analyze_in(pi: &Involution, ideal: &OrbitIdeal, opts: &Options) -> Result<Verdict> {
    let n = pi.n();
    let rs_graph = rs_from_ideal(ideal);
    let rs_even_shortcut = if n.is_multiple_of(2) {
        Some(even_shortcut_from_ideal(ideal)?)
    } else {
        None
    };
    let bad_pattern_witnesses: Vec<DecoratedPattern> =
        witnesses(pi, &opts.badlist).into_iter().cloned().collect();
    let smoothness_witnesses: Vec<DecoratedPattern> =
        witnesses(pi, &opts.extras).into_iter().cloned().collect();
    let rs_patterns = bad_pattern_witnesses.is_empty();
    let smooth_patterns = rs_patterns && smoothness_witnesses.is_empty();
    let jacobian = if opts.jacobian {
        Some(jacobian_report(pi, opts.field, opts.trials, opts.seed)?)
    } else {
        None
    };
    let smooth_jacobian = jacobian.as_ref().map(|j| j.smooth);
    let degrees = ideal.w0_conjugate_degrees();

    let mut disagreements = Vec::new();
    if rs_graph != rs_patterns {
        disagreements.push(format!("rs_graph={rs_graph} but rs_patterns={rs_patterns}"));
    }
    if let Some(s) = rs_even_shortcut {
        if s != rs_graph {
            disagreements.push(format!("rs_even_shortcut={s} but rs_graph={rs_graph}"));
        }
    }
    if let Some(s) = smooth_jacobian {
        if s != smooth_patterns {
            disagreements.push(format!(
                "smooth_jacobian={s} but smooth_patterns={smooth_patterns}"
            ));
        }
        if s && !rs_graph {
            disagreements.push("smooth_jacobian=true but rs_graph=false".into());
        }
    }
    for (sigma, d) in &degrees {
        if *d < ideal.r_pi() {
            disagreements.push(format!(
                "degree lower bound violated: deg({sigma}) = {d} < r = {}",
                ideal.r_pi()
            ));
        }
    }

    Ok(Verdict {
        pi: pi.clone(),
        r_pi: ideal.r_pi(),
        rs_graph,
        rs_patterns,
        rs_even_shortcut,
        smooth_patterns,
        smooth_jacobian,
        w0_conjugate_degrees: degrees
            .into_iter()
            .map(|(s, d)| (s.to_string(), d))
            .collect(),
        bad_pattern_witnesses,
        smoothness_witnesses,
        jacobian,
        disagreements,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub rs_graph: usize,
    pub rs_patterns: usize,
    pub smooth_patterns: usize,
    pub smooth_jacobian: Option<usize>,
    pub disagreements: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurveyReport {
    pub n: usize,
    pub patterns: String,
    pub extras: String,
    pub prime: Option<u64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub summary: Summary,
    pub rows: Vec<Verdict>,
}

impl SurveyReport {
    pub fn all_consistent(&self) -> bool {
        self.summary.disagreements == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "pi,r_pi,rs_graph,rs_patterns,rs_even_shortcut,smooth_patterns,smooth_jacobian,codimension,w0_conjugate_degrees,disagreements\n",
        );
        let opt = |b: Option<bool>| b.map_or(String::new(), |v| v.to_string());
        for v in &self.rows {
            let degrees: Vec<String> = v
                .w0_conjugate_degrees
                .iter()
                .map(|(s, d)| format!("{s}:{d}"))
                .collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},\"{}\"",
                v.pi,
                v.r_pi,
                v.rs_graph,
                v.rs_patterns,
                opt(v.rs_even_shortcut),
                v.smooth_patterns,
                opt(v.smooth_jacobian),
                v.jacobian
                    .as_ref()
                    .map_or(String::new(), |j| j.codimension.to_string()),
                degrees.join(";"),
                v.disagreements.join("; ").replace('"', "'"),
            );
        }
        out
    }
}

fn check_batch_n(n: usize) -> Result<()> {
    if !(1..=MAX_SURVEY_N).contains(&n) {
        return Err(Error::Argument(format!(
            "n = {n} refused: batch runs support 1..={MAX_SURVEY_N} (n = 8 already means 764 involutions \
             with ideals of up to 764 vertices; n = 9 would be 2620 involutions and ~10x the work)"
        )));
    }
    Ok(())
}

/// Verdicts for every involution of `S_n`, in lexicographic order.
pub fn survey(n: usize, opts: &Options) -> Result<SurveyReport> {
    check_batch_n(n)?;
    let all = all_with_ranks(n)?;
    let rows: Vec<Verdict> = opts.pool()?.install(|| {
        all.par_iter()
            .map(|(pi, _)| analyze_in(pi, &build_ideal_from(pi, &all), opts))
            .collect::<Result<Vec<_>>>()
    })?;
    let count = |f: &dyn Fn(&Verdict) -> bool| rows.iter().filter(|v| f(v)).count();
    let summary = Summary {
        total: rows.len(),
        rs_graph: count(&|v| v.rs_graph),
        rs_patterns: count(&|v| v.rs_patterns),
        smooth_patterns: count(&|v| v.smooth_patterns),
        smooth_jacobian: opts
            .jacobian
            .then(|| count(&|v| v.smooth_jacobian == Some(true))),
        disagreements: count(&|v| !v.consistent()),
    };
    Ok(SurveyReport {
        n,
        patterns: opts.badlist.name().to_string(),
        extras: opts.extras.name().to_string(),
        prime: opts.jacobian.then(|| opts.field.p()),
        trials: opts.jacobian.then_some(opts.trials),
        seed: opts.jacobian.then_some(opts.seed),
        summary,
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// Graph criterion versus pattern avoidance (rational smoothness).
    GraphPatterns,
    /// Pattern criterion versus Jacobian criterion (smoothness).
    SmoothPatternsJacobian,
    /// Degree of `w0` alone versus all `w0`-conjugates, even `n`.
    EvenShortcut,
}

impl std::str::FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Theorem::GraphPatterns),
            "2" => Ok(Theorem::SmoothPatternsJacobian),
            "even" | "even-shortcut" => Ok(Theorem::EvenShortcut),
            other => Err(Error::Argument(format!(
                "unknown theorem {other:?} (expected 1, 2 or even)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub pi: Involution,
    pub reason: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub theorem: Theorem,
    pub max_n: usize,
    pub checked_per_n: BTreeMap<usize, usize>,
    pub counterexamples: Vec<Counterexample>,
    pub pass: bool,
}

/// Exhaustive check of one equivalence over all involutions up to `max_n`.
pub fn verify(theorem: Theorem, max_n: usize, opts: &Options) -> Result<VerifyReport> {
    check_batch_n(max_n)?;
    let mut opts = opts.clone();
    opts.jacobian = theorem == Theorem::SmoothPatternsJacobian;
    let stability: Vec<PrimeField> = STABILITY_PRIMES
        .iter()
        .map(|&p| PrimeField::new(p))
        .collect::<Result<_>>()?;
    let pool = opts.pool()?;
    let mut checked_per_n = BTreeMap::new();
    let mut counterexamples = Vec::new();
    for n in 1..=max_n {
        if theorem == Theorem::EvenShortcut && n % 2 == 1 {
            continue;
        }
        let all = all_with_ranks(n)?;
        let found: Vec<Option<Counterexample>> = pool.install(|| {
            all.par_iter()
                .map(|(pi, _)| {
                    let v = analyze_in(pi, &build_ideal_from(pi, &all), &opts)?;
                    let reason = match theorem {
                        Theorem::GraphPatterns => (v.rs_graph != v.rs_patterns).then(|| {
                            format!("rs_graph={} rs_patterns={}", v.rs_graph, v.rs_patterns)
                        }),
                        Theorem::EvenShortcut => {
                            (v.rs_even_shortcut != Some(v.rs_graph)).then(|| {
                                format!(
                                    "rs_even_shortcut={:?} rs_graph={}",
                                    v.rs_even_shortcut, v.rs_graph
                                )
                            })
                        }
                        Theorem::SmoothPatternsJacobian => {
                            match stable_codimension(pi, &stability, opts.trials, opts.seed) {
                                Err(e @ Error::Unstable { .. }) => Some(e.to_string()),
                                Err(e) => return Err(e),
                                Ok(c) if Some(c) != v.jacobian.as_ref().map(|j| j.codimension) => {
                                    Some(format!("stable codimension {c} differs from reported"))
                                }
                                Ok(_) => {
                                    (v.smooth_jacobian != Some(v.smooth_patterns)).then(|| {
                                        format!(
                                            "smooth_jacobian={:?} smooth_patterns={}",
                                            v.smooth_jacobian, v.smooth_patterns
                                        )
                                    })
                                }
                            }
                        }
                    };
                    Ok(reason.map(|reason| Counterexample {
                        pi: pi.clone(),
                        reason,
                        verdict: v,
                    }))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        checked_per_n.insert(n, all.len());
        counterexamples.extend(found.into_iter().flatten());
    }
    Ok(VerifyReport {
        theorem,
        max_n,
        checked_per_n,
        pass: counterexamples.is_empty(),
        counterexamples,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Oracle {
    Graph,
    Jacobian,
}

impl std::str::FromStr for Oracle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph" => Ok(Oracle::Graph),
            "jacobian" => Ok(Oracle::Jacobian),
            other => Err(Error::Argument(format!(
                "unknown oracle {other:?} (expected graph or jacobian)"
            ))),
        }
    }
}

/// Evaluates the oracle on every involution of size `1..=max_n`.
pub fn oracle_table(
    oracle: Oracle,
    max_n: usize,
    opts: &Options,
) -> Result<BTreeMap<Involution, bool>> {
    let pool = opts.pool()?;
    let mut table = BTreeMap::new();
    for n in 1..=max_n {
        let all = all_with_ranks(n)?;
        let vals: Vec<bool> = pool.install(|| {
            all.par_iter()
                .map(|(pi, _)| match oracle {
                    Oracle::Graph => Ok(rs_from_ideal(&build_ideal_from(pi, &all))),
                    Oracle::Jacobian => {
                        Ok(jacobian_report(pi, opts.field, opts.trials, opts.seed)?.smooth)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })?;
        table.extend(all.into_iter().map(|(p, _)| p).zip(vals));
    }
    Ok(table)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscoveredPattern {
    pub sigma: Involution,
    /// The bad-pattern list holds `sigma` undecorated.
    pub listed: bool,
    /// `sigma` contains some (possibly decorated) pattern of the bad list.
    pub covered_by_list: bool,
    /// `sigma` contains one of the smoothness extras.
    pub covered_by_extras: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscoverReport {
    pub oracle: Oracle,
    pub max_n: usize,
    pub minimal: Vec<DiscoveredPattern>,
    /// Involutions whose oracle value differs from avoidance of the
    /// undecorated minimal list.
    pub reconciliation_mismatches: Vec<Involution>,
}

/// Minimal bad involutions for the oracle, annotated against the lists, plus
/// the self-consistency check of undecorated avoidance.
pub fn discover(oracle: Oracle, max_n: usize, opts: &Options) -> Result<DiscoverReport> {
    check_batch_n(max_n)?;
    let table = oracle_table(oracle, max_n, opts)?;
    let minimal = discover_minimal_bad(max_n, |p| Ok(table[p]))?;
    let minimal_list = PatternList::new(
        "discovered".into(),
        format!("{oracle:?} oracle, max n {max_n}"),
        minimal
            .iter()
            .cloned()
            .map(DecoratedPattern::plain)
            .collect(),
    )
    .ok();
    let reconciliation_mismatches = table
        .iter()
        .filter(|(p, &ok)| {
            let avoid = minimal_list.as_ref().is_none_or(|l| avoids(p, l));
            avoid != ok
        })
        .map(|(p, _)| p.clone())
        .collect();
    let minimal = minimal
        .into_iter()
        .map(|sigma| DiscoveredPattern {
            listed: opts.badlist.contains_plain(&sigma),
            covered_by_list: !avoids(&sigma, &opts.badlist),
            covered_by_extras: !avoids(&sigma, &opts.extras),
            sigma,
        })
        .collect();
    Ok(DiscoverReport {
        oracle,
        max_n,
        minimal,
        reconciliation_mismatches,
    })
}
