//! Closed-form bounds on seed size and processing time, and an audit that
//! checks each bound's hypotheses and compares it with exact values.
//!
//! Values are exact rationals; ceilings and floats only appear in reports.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::cascade::ExactSearch;
use crate::error::{Result, WdmError};
use crate::graph::{Graph, GraphMetrics, Thresholds, DEFAULT_PATH_CAP};
use crate::solvers::{min_wdm_with, SolveOptions};

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn need_positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        Err(WdmError::param(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

/// `n / (2r + 2 - (2r + 1)(r / (r + 1))^t)`: lower bound on any seed with
/// processing time `t` when `Δ <= 2r + 1` and `τ >= r + 1`.
pub fn lower_bound_odd(n: u64, r: u64, t: u64) -> Result<BigRational> {
    need_positive("r", r)?;
    need_positive("t", t)?;
    let t = u32::try_from(t).map_err(|_| WdmError::param("t too large"))?;
    let q = frac(r, r + 1).pow(t as i32);
    Ok(rat(n) / (rat(2 * r + 2) - rat(2 * r + 1) * q))
}

/// Which threshold a `2r`-regular graph carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvenVariant {
    /// `τ ≡ r + 1`
    TauRPlus1,
    /// `τ ≡ r`
    TauR,
}

/// Lower bound for `2r`-regular graphs: `n / (1 + r(1 - ((r-1)/(r+1))^t))`
/// with `τ ≡ r + 1`, or `n / (1 + 2t)` with `τ ≡ r`.
pub fn lower_bound_even_regular(n: u64, r: u64, t: u64, variant: EvenVariant) -> Result<BigRational> {
    need_positive("r", r)?;
    need_positive("t", t)?;
    Ok(match variant {
        EvenVariant::TauRPlus1 => {
            let t = u32::try_from(t).map_err(|_| WdmError::param("t too large"))?;
            let q = frac(r - 1, r + 1).pow(t as i32);
            rat(n) / (BigRational::one() + rat(r) * (BigRational::one() - q))
        }
        EvenVariant::TauR => rat(n) / rat(1 + 2 * t),
    })
}

/// `(t_m - 1)^(⌊k/2⌋ + 1)` for even girth `2k + 2`, `k >= 3`, `t_m >= 3`.
pub fn lower_bound_even_girth(t_m: u64, k: u64) -> Result<BigInt> {
    if t_m < 3 || k < 3 {
        return Err(WdmError::Precondition(format!(
            "needs t_m >= 3 and k >= 3, got t_m = {t_m}, k = {k}"
        )));
    }
    Ok(num_traits::pow(BigInt::from(t_m - 1), (k / 2 + 1) as usize))
}

/// Minimum order `1 + ((t_m+1)/(t_m-2))((t_m-1)^k - 1) + t_m(t_m-2)` of a
/// graph meeting the even-girth hypotheses.
pub fn even_girth_min_order(t_m: u64, k: u64) -> Result<BigRational> {
    if t_m < 3 || k < 3 {
        return Err(WdmError::Precondition(format!(
            "needs t_m >= 3 and k >= 3, got t_m = {t_m}, k = {k}"
        )));
    }
    let pow = num_traits::pow(BigInt::from(t_m - 1), k as usize);
    Ok(BigRational::one()
        + frac(t_m + 1, t_m - 2) * BigRational::from_integer(pow - 1)
        + rat(t_m * (t_m - 2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Lower bound on a seed size.
    LowerSize,
    /// Upper bound on the minimum seed size.
    UpperSize,
    /// Upper bound on the processing time of every partition.
    UpperTime,
    /// Lower bound on the number of vertices.
    LowerOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub applicable: bool,
    /// Failed hypotheses, or context for applicable entries.
    pub notes: Vec<String>,
    pub direction: Direction,
    #[serde(serialize_with = "ser_value")]
    pub value: Option<BigRational>,
    /// The exact quantity the bound was compared with.
    pub compared: Option<u64>,
    pub satisfied: Option<bool>,
}

#[derive(Serialize)]
struct ValueView {
    exact: String,
    approx: f64,
    ceil: String,
    floor: String,
}

fn ser_value<S: Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref()
        .map(|r| ValueView {
            exact: r.to_string(),
            approx: r.to_f64().unwrap_or(f64::NAN),
            ceil: r.ceil().to_integer().to_string(),
            floor: r.floor().to_integer().to_string(),
        })
        .serialize(s)
}

impl BoundEntry {
    fn new(name: &str, direction: Direction) -> BoundEntry {
        BoundEntry {
            name: name.into(),
            applicable: true,
            notes: Vec::new(),
            direction,
            value: None,
            compared: None,
            satisfied: None,
        }
    }

    fn require(&mut self, holds: bool, hypothesis: impl Into<String>) {
        if !holds {
            self.applicable = false;
            self.notes.push(format!("fails: {}", hypothesis.into()));
        }
    }

    fn compare(&mut self, exact: u64) {
        let (Some(v), true) = (&self.value, self.applicable) else {
            return;
        };
        let x = rat(exact);
        self.compared = Some(exact);
        self.satisfied = Some(match self.direction {
            Direction::LowerSize | Direction::LowerOrder => x >= *v,
            Direction::UpperSize | Direction::UpperTime => x <= *v,
        });
    }

    /// The value rounded the way the bound is used: up for lower bounds,
    /// down for upper bounds.
    pub fn rounded(&self) -> Option<BigInt> {
        self.value.as_ref().map(|v| match self.direction {
            Direction::LowerSize | Direction::LowerOrder => v.ceil().to_integer(),
            Direction::UpperSize | Direction::UpperTime => v.floor().to_integer(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn violations(&self) -> Vec<&BoundEntry> {
        self.entries
            .iter()
            .filter(|e| e.applicable && e.satisfied == Some(false))
            .collect()
    }

    /// Plain-text table, one entry per line.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<28} {:<11} {:<12} {:>14} {:>8} {:>9}",
            "bound", "applicable", "direction", "value", "exact", "satisfied"
        );
        for e in &self.entries {
            let value = e.value.as_ref().map_or("-".to_string(), |v| {
                format!("{:.3}", v.to_f64().unwrap_or(f64::NAN))
            });
            let dir = match e.direction {
                Direction::LowerSize => "size >=",
                Direction::UpperSize => "size <=",
                Direction::UpperTime => "time <=",
                Direction::LowerOrder => "order >=",
            };
            let _ = writeln!(
                out,
                "{:<28} {:<11} {:<12} {:>14} {:>8} {:>9}",
                e.name,
                e.applicable,
                dir,
                value,
                e.compared.map_or("-".into(), |c| c.to_string()),
                e.satisfied.map_or("-".into(), |s| s.to_string()),
            );
            for note in &e.notes {
                let _ = writeln!(out, "    {note}");
            }
        }
        out
    }
}

/// Exact facts about one seed: its size and the range of processing times
/// over its valid partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeedFacts {
    pub size: usize,
    pub t_min: usize,
    pub t_max: usize,
    /// Whether the seed is known to be of minimum size.
    pub minimum: bool,
}

impl SeedFacts {
    /// Solves for a minimum seed and measures its processing times.
    pub fn minimum(g: &Graph, tau: &Thresholds, opts: &SolveOptions) -> Result<SeedFacts> {
        let r = min_wdm_with(g, tau, opts)?;
        let mut facts = Self::for_seed(g, tau, &r.witness, opts.cap)?;
        facts.minimum = true;
        Ok(facts)
    }

    /// Facts for a given seed; fails with `Infeasible` if it is not a weak
    /// dynamic monopoly.
    pub fn for_seed(g: &Graph, tau: &Thresholds, seed: &[usize], cap: usize) -> Result<SeedFacts> {
        let range = ExactSearch::with_cap(g, tau, cap)?
            .time_range(seed)?
            .ok_or_else(|| WdmError::Infeasible("seed is not a weak dynamic monopoly".into()))?;
        Ok(SeedFacts {
            size: range.fastest.seed().len(),
            t_min: range.t_min,
            t_max: range.t_max,
            minimum: false,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditConfig {
    /// Bounded-degree growth is only audited when `Δ` is at most this.
    pub degree_constant: usize,
    pub path_cap: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            degree_constant: 8,
            path_cap: DEFAULT_PATH_CAP,
        }
    }
}

/// Processing-time bounds that depend only on `g` and `τ`.
pub fn time_bounds(g: &Graph, tau: &Thresholds) -> BoundReport {
    let metrics = GraphMetrics::compute(g, DEFAULT_PATH_CAP);
    BoundReport {
        entries: time_entries(g, tau, &metrics),
    }
}

fn time_entries(g: &Graph, tau: &Thresholds, m: &GraphMetrics) -> Vec<BoundEntry> {
    let k = tau.min().unwrap_or(0) as u64;
    let mut matching = BoundEntry::new("matching_time", Direction::UpperTime);
    matching.require(k >= 1, "min threshold >= 1");
    if k >= 1 {
        matching.value = Some(frac(2 * m.matching_number as u64, k) + rat(2));
        matching
            .notes
            .push(format!("matching number {}, k = {k}", m.matching_number));
    }

    let mut path = BoundEntry::new("longest_path_time", Direction::UpperTime);
    path.require(k >= 2, "min threshold >= 2");
    let mut strict = BoundEntry::new("strict_majority_path_time", Direction::UpperTime);
    strict.require(tau.is_strict_majority(g), "strict majority thresholds");
    match m.longest_path_len {
        Some(l) => {
            path.value = Some(frac(l as u64, 2));
            strict.value = Some(frac(l as u64 + 2, 2));
            path.notes.push(format!("longest path {l}"));
            strict.notes.push(format!("longest path {l}"));
        }
        None => {
            for e in [&mut path, &mut strict] {
                e.require(false, "longest path within the size cap");
            }
        }
    }
    vec![matching, path, strict]
}

/// Evaluates every bound on `(g, τ)`. With `facts`, each applicable bound is
/// compared with the exact values, and a violated one is an error.
pub fn audit(g: &Graph, tau: &Thresholds, facts: Option<&SeedFacts>) -> Result<BoundReport> {
    audit_with(g, tau, facts, &AuditConfig::default())
}

pub fn audit_with(
    g: &Graph,
    tau: &Thresholds,
    facts: Option<&SeedFacts>,
    cfg: &AuditConfig,
) -> Result<BoundReport> {
    if tau.len() != g.n() {
        return Err(WdmError::param("threshold count differs from vertex count"));
    }
    let n = g.n() as u64;
    let metrics = GraphMetrics::compute(g, cfg.path_cap);
    let delta = metrics.max_degree as u64;
    let t_m = tau.min().unwrap_or(0) as u64;
    let mut entries = Vec::new();

    let mut e = BoundEntry::new("strict_majority_upper", Direction::UpperSize);
    e.require(tau.is_strict_majority(g), "strict majority thresholds");
    e.require(metrics.min_degree >= 1, "no isolated vertices");
    e.value = Some(frac(2 * n, 3));
    if facts.is_some_and(|f| !f.minimum) {
        e.notes.push("seed not known to be minimum; not compared".into());
    } else if let Some(f) = facts {
        e.compare(f.size as u64);
    }
    entries.push(e);

    let mut e = BoundEntry::new("cubic_lower", Direction::LowerSize);
    e.require(g.regular_degree() == Some(3), "cubic");
    e.require(g.is_connected(), "connected");
    e.require(tau.constant_value() == Some(2), "tau = 2 everywhere");
    e.value = Some(frac(n + 2, 4));
    if let Some(f) = facts {
        e.compare(f.size as u64);
    }
    entries.push(e);

    let at_times = |name: &str, eval: &dyn Fn(u64) -> Result<BigRational>, hyp: &[(bool, String)], note: String| {
        let mut out = Vec::new();
        let times: Vec<(&str, Option<u64>)> = match facts {
            Some(f) => vec![("t_min", Some(f.t_min as u64)), ("t_max", Some(f.t_max as u64))],
            None => vec![("t", None)],
        };
        for (label, t) in times {
            let mut e = BoundEntry::new(&format!("{name}@{label}"), Direction::LowerSize);
            for (holds, h) in hyp {
                e.require(*holds, h.clone());
            }
            e.notes.push(note.clone());
            match t {
                Some(0) => e.require(false, "processing time >= 1"),
                Some(t) => {
                    if e.applicable {
                        e.value = eval(t).ok();
                    }
                    e.notes.push(format!("t = {t}"));
                }
                None => e.notes.push("needs a processing time; not evaluated".into()),
            }
            if let Some(f) = facts {
                e.compare(f.size as u64);
            }
            out.push(e);
        }
        out
    };

    let r = 1.max(delta.saturating_sub(1).div_ceil(2));
    entries.extend(at_times(
        "odd_degree_lower",
        &|t| lower_bound_odd(n, r, t),
        &[(t_m >= r + 1, format!("min threshold >= r + 1 = {}", r + 1))],
        format!("r = {r}, max degree {delta} <= 2r + 1"),
    ));

    let reg = g.regular_degree().map(|d| d as u64);
    let even_r = reg.filter(|d| *d >= 2 && d % 2 == 0).map(|d| d / 2);
    let variant = match (even_r, tau.constant_value().map(u64::from)) {
        (Some(r), Some(c)) if c == r + 1 => Some(EvenVariant::TauRPlus1),
        (Some(r), Some(c)) if c == r => Some(EvenVariant::TauR),
        _ => None,
    };
    entries.extend(at_times(
        "even_regular_lower",
        &|t| lower_bound_even_regular(n, even_r.unwrap_or(1), t, variant.unwrap_or(EvenVariant::TauR)),
        &[
            (even_r.is_some(), "2r-regular with r >= 1".into()),
            (variant.is_some(), "tau constant, equal to r or r + 1".into()),
        ],
        match (even_r, variant) {
            (Some(r), Some(v)) => format!("r = {r}, variant {v:?}"),
            _ => "needs 2r-regular graph".into(),
        },
    ));

    let mut e = BoundEntry::new("even_girth_lower", Direction::LowerSize);
    let mut order = BoundEntry::new("even_girth_order", Direction::LowerOrder);
    let k = metrics.even_girth.map(|eg| (eg as u64 - 2) / 2);
    let tau_inside = (0..g.n()).all(|v| (tau.get(v) as usize) < g.degree(v));
    for entry in [&mut e, &mut order] {
        entry.require(k.is_some_and(|k| k >= 3), "even girth 2k + 2 with k >= 3");
        entry.require(tau_inside, "0 < tau(v) < deg(v) everywhere");
        entry.require(t_m >= 3, "min threshold >= 3");
        entry.notes.push(format!(
            "even girth {}, t_m = {t_m}",
            metrics.even_girth.map_or("none".into(), |x| x.to_string())
        ));
    }
    if e.applicable {
        let k = k.expect("checked");
        e.value = Some(BigRational::from_integer(lower_bound_even_girth(t_m, k)?));
        order.value = Some(even_girth_min_order(t_m, k)?);
        order.compare(n);
        if let Some(f) = facts {
            e.compare(f.size as u64);
        }
    }
    entries.push(e);
    entries.push(order);

    let mut times = time_entries(g, tau, &metrics);
    if let Some(f) = facts {
        for e in &mut times {
            e.compare(f.t_max as u64);
        }
    }
    entries.extend(times);

    let kk = delta.max(2);
    let growth_hyp = [(
        metrics.max_degree <= cfg.degree_constant,
        format!("max degree {delta} <= degree constant {}", cfg.degree_constant),
    )];
    entries.extend(at_times(
        "degree_growth",
        &|t| {
            let t = u32::try_from(t + 1).map_err(|_| WdmError::param("t too large"))?;
            Ok(rat(n) / rat(kk).pow(t as i32))
        },
        &growth_hyp,
        format!("n <= k^(t+1) |D| with k = max(max degree, 2) = {kk}"),
    ));

    let report = BoundReport { entries };
    let bad = report.violations();
    if !bad.is_empty() {
        let names: Vec<&str> = bad.iter().map(|e| e.name.as_str()).collect();
        return Err(WdmError::BoundViolated(names.join(", ")));
    }
    Ok(report)
}

impl BoundEntry {
    /// Whether the entry is applicable and its value could be computed.
    pub fn evaluated(&self) -> bool {
        self.applicable && self.value.is_some()
    }
}
