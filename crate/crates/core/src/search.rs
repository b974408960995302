//! Search for small integer forms with a large Bohnenblust–Hille ratio.
//!
//! The ratio of a nonzero form is `mixed_norm(T, 2m/(m+1)) / ‖T‖`, the lower
//! bound for `C_m` that `T` certifies. Two strategies: exhaustive enumeration
//! over `alphabet^{n^m}`, and seeded hill climbing with single-coefficient
//! moves and random restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{certify_lower_bound, Certificate};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::format::FormDoc;
use crate::norms::{bh_exponent, mixed_norm, sup_norm_exact, NormMethod};
use crate::tensor::CoeffTensor;

/// Relative gap below which two ratios count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

/// Exhaustive search evaluates forms in chunks of this many indices.
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Exhaustive,
    HillClimb,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "hillclimb" | "hill-climb" => Ok(Strategy::HillClimb),
            other => Err(Error::argument(format!(
                "unknown strategy {other:?} (expected exhaustive or hillclimb)"
            ))),
        }
    }
}

/// Forms on `(ℓ∞^n)^m` with coefficients from `alphabet`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub n: usize,
    pub m: usize,
    /// Sorted, deduplicated.
    pub alphabet: Vec<i64>,
    /// Maximum number of form evaluations.
    pub budget: u64,
    pub seed: u64,
}

impl SearchSpace {
    pub fn new(n: usize, m: usize, alphabet: Vec<i64>, budget: u64, seed: u64) -> Result<Self> {
        let mut alphabet = alphabet;
        alphabet.sort_unstable();
        alphabet.dedup();
        let space = SearchSpace {
            n,
            m,
            alphabet,
            budget,
            seed,
        };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::argument(
                "search dimensions n and m must be at least 1",
            ));
        }
        if !self.alphabet.iter().any(|&a| a != 0) {
            return Err(Error::argument("alphabet needs a nonzero coefficient"));
        }
        if self.alphabet.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::argument(
                "alphabet must be sorted and duplicate-free",
            ));
        }
        if self.budget == 0 {
            return Err(Error::argument("search budget must be positive"));
        }
        Ok(())
    }

    /// Number of coefficients `n^m`.
    pub fn positions(&self) -> Result<usize> {
        u32::try_from(self.m)
            .ok()
            .and_then(|m| self.n.checked_pow(m))
            .ok_or_else(|| Error::argument("n^m overflows"))
    }

    fn dims(&self) -> Vec<usize> {
        vec![self.n; self.m]
    }

    fn form(&self, coeffs: &[i64]) -> CoeffTensor {
        CoeffTensor::from_dense(self.dims(), coeffs).expect("coefficient vector matches the space")
    }

    /// Fails early when a single norm in this space would exceed the budget.
    fn check_norm_budget(&self, cfg: &Config) -> Result<()> {
        let bits = (self.m - 1) * self.n;
        if bits >= 64 || (1u64 << bits) > cfg.budget {
            return Err(Error::Resource {
                what: format!("norms on (l_inf^{})^{}", self.n, self.m),
                required: format!("2^{bits} sign assignments"),
                budget: cfg.budget,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub strategy: Strategy,
    pub space: SearchSpace,
    pub restarts: Option<u64>,
    pub evaluations: u64,
    pub truncated: bool,
    pub best_ratio: f64,
    /// `(evaluation index, ratio)` at every strict improvement of the best.
    pub trajectory: Vec<(u64, f64)>,
    pub best: Certificate,
    /// The winning form in form-file layout.
    pub form: FormDoc,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        crate::format::to_document(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `mixed_norm(form, 2m/(m+1)) / ‖form‖`.
pub fn ratio(form: &CoeffTensor, cfg: &Config) -> Result<f64> {
    if form.is_zero() {
        return Err(Error::argument("the ratio of the zero form is undefined"));
    }
    let p = bh_exponent(form.arity() as u32)?;
    let mixed = mixed_norm(form, p)?;
    let norm = sup_norm_exact(form, cfg)?;
    Ok(mixed.value / norm.value as f64)
}

fn beats(r: f64, best: f64) -> bool {
    r > best * (1.0 + TIE_TOLERANCE)
}

fn ties(r: f64, best: f64) -> bool {
    !beats(r, best) && !beats(best, r)
}

/// Decodes a base-|alphabet| index into a coefficient vector; index order is
/// lexicographic order of the vectors.
fn decode(index: u64, alphabet: &[i64], positions: usize, out: &mut [i64]) {
    let base = alphabet.len() as u64;
    let mut rest = index;
    for slot in out[..positions].iter_mut().rev() {
        *slot = alphabet[(rest % base) as usize];
        rest /= base;
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::argument(format!("cannot start worker pool: {e}")))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    space: &SearchSpace,
    strategy: Strategy,
    restarts: Option<u64>,
    evaluations: u64,
    truncated: bool,
    best: (f64, Vec<i64>),
    trajectory: Vec<(u64, f64)>,
    cfg: &Config,
) -> Result<SearchReport> {
    let form = space.form(&best.1);
    let cert = certify_lower_bound(&form, NormMethod::Exhaustive, &cfg.sequential())?;
    if (cert.lower_bound.value() - best.0).abs() > cfg.tolerance {
        return Err(Error::consistency(format!(
            "search ratio {} disagrees with its certificate {}",
            best.0, cert.lower_bound
        )));
    }
    Ok(SearchReport {
        strategy,
        space: space.clone(),
        restarts,
        evaluations,
        truncated,
        best_ratio: best.0,
        trajectory,
        form: FormDoc::from(&form),
        best: cert,
    })
}

/// Evaluates every nonzero form in the space. Ties keep the
/// lexicographically smallest coefficient vector.
pub fn exhaustive_search(space: &SearchSpace, cfg: &Config) -> Result<SearchReport> {
    space.validate()?;
    cfg.validate()?;
    let positions = space.positions()?;
    let total = u32::try_from(positions)
        .ok()
        .and_then(|p| (space.alphabet.len() as u64).checked_pow(p))
        .filter(|&t| t <= space.budget)
        .ok_or_else(|| Error::Resource {
            what: format!(
                "exhaustive search over {}^{positions} forms",
                space.alphabet.len()
            ),
            required: format!("{}^{positions} evaluations", space.alphabet.len()),
            budget: space.budget,
        })?;
    space.check_norm_budget(cfg)?;

    let inner = cfg.sequential();
    let eval = |i: u64| -> Result<Option<f64>> {
        let mut coeffs = vec![0i64; positions];
        decode(i, &space.alphabet, positions, &mut coeffs);
        if coeffs.iter().all(|&c| c == 0) {
            return Ok(None);
        }
        ratio(&space.form(&coeffs), &inner).map(Some)
    };
    let workers = if cfg.threads > 1 {
        Some(pool(cfg.threads)?)
    } else {
        None
    };

    let mut best: Option<(f64, u64)> = None;
    let mut trajectory = Vec::new();
    let mut evaluations = 0u64;
    let mut start = 0u64;
    while start < total {
        let end = (start + CHUNK).min(total);
        let chunk: Vec<Option<f64>> = match &workers {
            Some(p) => p.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(eval)
                    .collect::<Result<_>>()
            })?,
            None => (start..end).map(eval).collect::<Result<_>>()?,
        };
        for (offset, r) in chunk.into_iter().enumerate() {
            let Some(r) = r else { continue };
            evaluations += 1;
            // Indices increase, so a tie never displaces the incumbent.
            if best.is_none_or(|(b, _)| beats(r, b)) {
                if best.is_some() {
                    trajectory.push((evaluations, r));
                }
                best = Some((r, start + offset as u64));
            }
        }
        start = end;
    }
    let (r, idx) = best.ok_or_else(|| Error::argument("the space contains only the zero form"))?;
    let mut coeffs = vec![0i64; positions];
    decode(idx, &space.alphabet, positions, &mut coeffs);
    finish(
        space,
        Strategy::Exhaustive,
        None,
        evaluations,
        false,
        (r, coeffs),
        trajectory,
        cfg,
    )
}

/// Improvements seen by one climb, in evaluation order.
struct ClimbLog {
    /// `(evaluation index within the climb, ratio, coefficients)`; the first
    /// record is the starting form.
    records: Vec<(u64, f64, Vec<i64>)>,
    evaluations: u64,
    hit_cap: bool,
}

fn random_start(space: &SearchSpace, positions: usize, climb: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(space.seed);
    rng.set_stream(climb);
    loop {
        let v: Vec<i64> = (0..positions)
            .map(|_| space.alphabet[rng.random_range(0..space.alphabet.len())])
            .collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

/// Steepest-ascent climb from `start`, evaluating at most `cap` forms.
fn climb(space: &SearchSpace, start: Vec<i64>, cap: u64, cfg: &Config) -> Result<ClimbLog> {
    let mut evaluations = 1u64;
    let mut current = start;
    let mut current_ratio = ratio(&space.form(&current), cfg)?;
    let mut records = vec![(1, current_ratio, current.clone())];
    let mut best_seen = current_ratio;

    loop {
        let mut best_move: Option<(f64, Vec<i64>)> = None;
        for pos in 0..current.len() {
            for &v in &space.alphabet {
                if v == current[pos] {
                    continue;
                }
                let mut cand = current.clone();
                cand[pos] = v;
                if cand.iter().all(|&c| c == 0) {
                    continue;
                }
                if evaluations >= cap {
                    return Ok(ClimbLog {
                        records,
                        evaluations,
                        hit_cap: true,
                    });
                }
                evaluations += 1;
                let r = ratio(&space.form(&cand), cfg)?;
                if beats(r, best_seen) {
                    best_seen = r;
                    records.push((evaluations, r, cand.clone()));
                }
                let better = match &best_move {
                    None => true,
                    Some((b, c)) => beats(r, *b) || (ties(r, *b) && cand < *c),
                };
                if better {
                    best_move = Some((r, cand));
                }
            }
        }
        match best_move {
            Some((r, cand)) if beats(r, current_ratio) => {
                current = cand;
                current_ratio = r;
            }
            _ => break,
        }
    }
    Ok(ClimbLog {
        records,
        evaluations,
        hit_cap: false,
    })
}

/// Hill climbing with `restarts` additional random starts.
///
/// Climb 0 starts from `initial` (or a seeded random form); climb `k ≥ 1`
/// starts from a random form drawn from the ChaCha stream `k` of the seed.
/// Climbs run independently and are merged in order, charging the shared
/// budget as if they had run one after another, so the report does not depend
/// on the thread count.
pub fn hill_climb(
    space: &SearchSpace,
    restarts: u64,
    initial: Option<&CoeffTensor>,
    cfg: &Config,
) -> Result<SearchReport> {
    space.validate()?;
    cfg.validate()?;
    let positions = space.positions()?;
    space.check_norm_budget(cfg)?;

    let first = match initial {
        Some(t) => {
            if t.dims() != space.dims().as_slice() {
                return Err(Error::Dimension(format!(
                    "initial form has dims {:?}, space has {:?}",
                    t.dims(),
                    space.dims()
                )));
            }
            if t.is_zero() {
                return Err(Error::argument("initial form must be nonzero"));
            }
            let coeffs = t.to_dense();
            if let Some(c) = coeffs
                .iter()
                .find(|c| space.alphabet.binary_search(c).is_err())
            {
                return Err(Error::argument(format!(
                    "initial coefficient {c} is outside the alphabet"
                )));
            }
            coeffs
        }
        None => random_start(space, positions, 0),
    };

    let inner = cfg.sequential();
    let run = |k: u64| -> Result<ClimbLog> {
        let start = if k == 0 {
            first.clone()
        } else {
            random_start(space, positions, k)
        };
        climb(space, start, space.budget, &inner)
    };
    let climbs = restarts + 1;
    let logs: Vec<ClimbLog> = if cfg.threads > 1 {
        pool(cfg.threads)?
            .install(|| (0..climbs).into_par_iter().map(run).collect::<Result<_>>())?
    } else {
        (0..climbs).map(run).collect::<Result<_>>()?
    };

    let mut used = 0u64;
    let mut truncated = false;
    let mut best: Option<(f64, Vec<i64>)> = None;
    let mut trajectory = Vec::new();
    for log in logs {
        let remaining = space.budget - used;
        if remaining == 0 {
            truncated = true;
            break;
        }
        let allowed = log.evaluations.min(remaining);
        for (at, r, coeffs) in log
            .records
            .into_iter()
            .take_while(|(at, _, _)| *at <= allowed)
        {
            let better = match &best {
                None => true,
                Some((b, c)) => beats(r, *b) || (ties(r, *b) && coeffs < *c),
            };
            if better {
                if best.as_ref().is_some_and(|(b, _)| beats(r, *b)) {
                    trajectory.push((used + at, r));
                }
                best = Some((r, coeffs));
            }
        }
        used += allowed;
        if log.hit_cap || allowed < log.evaluations {
            truncated = true;
            break;
        }
    }
    let best = best.expect("every climb evaluates its start");
    finish(
        space,
        Strategy::HillClimb,
        Some(restarts),
        used,
        truncated,
        best,
        trajectory,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::build_extremal_form;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn ratio_examples() {
        let t3 = build_extremal_form(3, &cfg()).unwrap();
        assert!((ratio(&t3, &cfg()).unwrap() - 2f64.powf(2.0 / 3.0)).abs() < 1e-12);
        let single = CoeffTensor::from_entries(vec![3, 3], [(vec![2, 3], 5)]).unwrap();
        assert!((ratio(&single, &cfg()).unwrap() - 1.0).abs() < 1e-12);
        assert!(ratio(&CoeffTensor::zeros(vec![2, 2]).unwrap(), &cfg()).is_err());
    }

    #[test]
    fn decode_is_lexicographic() {
        let a = [-1, 0, 1];
        let mut prev = vec![0; 3];
        decode(0, &a, 3, &mut prev);
        assert_eq!(prev, vec![-1, -1, -1]);
        for i in 1..27 {
            let mut cur = vec![0; 3];
            decode(i, &a, 3, &mut cur);
            assert!(cur > prev);
            prev = cur;
        }
        assert_eq!(prev, vec![1, 1, 1]);
    }

    #[test]
    fn space_validation() {
        assert!(SearchSpace::new(0, 2, vec![1], 10, 0).is_err());
        assert!(SearchSpace::new(2, 2, vec![0], 10, 0).is_err());
        assert!(SearchSpace::new(2, 2, vec![1], 0, 0).is_err());
        let s = SearchSpace::new(2, 2, vec![1, -1, 1, 0], 10, 0).unwrap();
        assert_eq!(s.alphabet, vec![-1, 0, 1]);
    }

    #[test]
    fn exhaustive_budget() {
        let s = SearchSpace::new(2, 2, vec![-1, 0, 1], 80, 0).unwrap();
        assert!(matches!(
            exhaustive_search(&s, &cfg()),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn one_dimensional_spaces_give_one() {
        for m in 1..=4 {
            let s = SearchSpace::new(1, m, vec![-1, 1], 10, 0).unwrap();
            let r = exhaustive_search(&s, &cfg()).unwrap();
            assert!((r.best_ratio - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn strategy_parse() {
        assert_eq!(
            "hillclimb".parse::<Strategy>().unwrap(),
            Strategy::HillClimb
        );
        assert!("annealing".parse::<Strategy>().is_err());
    }

    #[test]
    fn initial_form_checks() {
        let s = SearchSpace::new(2, 2, vec![-1, 0, 1], 100, 0).unwrap();
        let wrong = CoeffTensor::from_entries(vec![3, 3], [(vec![1, 1], 1)]).unwrap();
        assert!(hill_climb(&s, 0, Some(&wrong), &cfg()).is_err());
        let big = CoeffTensor::from_entries(vec![2, 2], [(vec![1, 1], 2)]).unwrap();
        assert!(hill_climb(&s, 0, Some(&big), &cfg()).is_err());
    }
}
