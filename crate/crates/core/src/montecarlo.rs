//! Seeded sampling of uniform random transformations and estimates of the
//! event probabilities, including the sufficient-condition event that lower
//! bounds the probability of a ubiquitous random semigroup.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gensets::satisfies_sufficient_condition;
use crate::transform::Transformation;

pub const RNG_NAME: &str = "ChaCha8 (rand_chacha), stream = worker index";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Quantity {
    G,
    T,
    V,
    Suff,
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "G" => Ok(Quantity::G),
            "T" => Ok(Quantity::T),
            "V" => Ok(Quantity::V),
            "SUFF" => Ok(Quantity::Suff),
            _ => Err(Error::Parse(format!("unknown quantity {s:?}, expected G, T, V or SUFF"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interval {
    #[default]
    Normal,
    Wilson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub interval: Interval,
}

impl SamplingConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            workers: 1,
            interval: Interval::Normal,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn interval(mut self, interval: Interval) -> Self {
        self.interval = interval;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub quantity: Quantity,
    pub n: usize,
    pub k: Option<usize>,
    pub samples: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub interval: Interval,
    pub seed: u64,
    pub workers: usize,
    pub rng: String,
    /// Set for SUFF: the event only lower-bounds the ubiquity probability.
    pub lower_bound_event: bool,
}

impl Estimate {
    /// Standard error of `p_hat`.
    pub fn sigma(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.samples as f64).sqrt()
    }
}

/// Each image drawn independently and uniformly.
pub fn random_transformation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Transformation {
    let images: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n as u32)).collect();
    Transformation::from_images_unchecked(images)
}

/// The generator for worker `index`: one ChaCha stream per worker.
pub fn worker_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn interval(successes: u64, samples: u64, kind: Interval) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    let n = samples as f64;
    let p = successes as f64 / n;
    let (lo, hi) = match kind {
        Interval::Normal => {
            let half = Z * (p * (1.0 - p) / n).sqrt();
            (p - half, p + half)
        }
        Interval::Wilson => {
            let z2 = Z * Z;
            let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
            let half = Z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
            (centre - half, centre + half)
        }
    };
    (lo.clamp(0.0, 1.0).min(p), hi.clamp(0.0, 1.0).max(p))
}

/// Splits `samples` over workers; worker `w` draws from its own stream.
fn run<F>(config: &SamplingConfig, event: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let workers = config.workers.max(1);
    let share = |w: usize| {
        let base = config.samples / workers as u64;
        base + u64::from((w as u64) < config.samples % workers as u64)
    };
    if workers == 1 {
        let mut rng = worker_rng(config.seed, 0);
        return (0..share(0)).filter(|_| event(&mut rng)).count() as u64;
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let event = &event;
                scope.spawn(move || {
                    let mut rng = worker_rng(config.seed, w);
                    (0..share(w)).filter(|_| event(&mut rng)).count() as u64
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).sum()
    })
}

fn check(n: usize, config: &SamplingConfig) -> Result<()> {
    if n < 1 {
        return invalid("degree must be at least 1");
    }
    if config.samples < 1 {
        return invalid("samples must be at least 1");
    }
    Ok(())
}

fn finish(quantity: Quantity, n: usize, k: Option<usize>, successes: u64, config: &SamplingConfig) -> Estimate {
    let (ci95_low, ci95_high) = interval(successes, config.samples, config.interval);
    Estimate {
        quantity,
        n,
        k,
        samples: config.samples,
        successes,
        p_hat: successes as f64 / config.samples as f64,
        ci95_low,
        ci95_high,
        interval: config.interval,
        seed: config.seed,
        workers: config.workers.max(1),
        rng: RNG_NAME.into(),
        lower_bound_event: quantity == Quantity::Suff,
    }
}

/// Estimates `G`, `T` or `V` at degree `n`.
pub fn estimate(quantity: Quantity, n: usize, config: &SamplingConfig) -> Result<Estimate> {
    check(n, config)?;
    let successes = match quantity {
        Quantity::G => run(config, |rng| random_transformation(n, rng).is_group_generator()),
        Quantity::T => run(config, |rng| {
            let x = random_transformation(n, rng);
            let y = random_transformation(n, rng);
            x.compose_unchecked(&y).compose_unchecked(&x).rank() == y.rank()
        }),
        Quantity::V => run(config, |rng| {
            let x = random_transformation(n, rng);
            let y = random_transformation(n, rng);
            let z = random_transformation(n, rng);
            x.compose_unchecked(&y).compose_unchecked(&z).rank() == y.rank()
        }),
        Quantity::Suff => return invalid("use estimate_sufficient for SUFF"),
    };
    Ok(finish(quantity, n, None, successes, config))
}

/// Fraction of `k`-tuples satisfying the sufficient condition for ubiquity.
pub fn estimate_sufficient(n: usize, k: usize, config: &SamplingConfig) -> Result<Estimate> {
    check(n, config)?;
    if k < 1 {
        return invalid("k must be at least 1");
    }
    let successes = run(config, |rng| {
        let gens: Vec<Transformation> = (0..k).map(|_| random_transformation(n, rng)).collect();
        satisfies_sufficient_condition(&gens).expect("equal degrees")
    });
    Ok(finish(Quantity::Suff, n, Some(k), successes, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_g, exact_t, exact_v, to_f64};

    fn cfg(samples: u64, seed: u64) -> SamplingConfig {
        SamplingConfig::new(samples, seed)
    }

    #[test]
    fn degree_one_is_constant() {
        let mut rng = worker_rng(1, 0);
        for _ in 0..10 {
            assert_eq!(random_transformation(1, &mut rng).images(), &[0]);
        }
        let e = estimate(Quantity::G, 1, &cfg(100, 3)).unwrap();
        assert_eq!(e.p_hat, 1.0);
        let s = estimate_sufficient(1, 3, &cfg(100, 3)).unwrap();
        assert_eq!(s.p_hat, 0.0);
        assert!(s.lower_bound_event);
    }

    #[test]
    fn coordinates_are_uniform() {
        let mut rng = worker_rng(42, 0);
        let draws = 100_000;
        let mut counts = [[0u64; 3]; 3];
        for _ in 0..draws {
            let t = random_transformation(3, &mut rng);
            for (i, &v) in t.images().iter().enumerate() {
                counts[i][v as usize] += 1;
            }
        }
        let sigma = (draws as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for row in counts {
            for c in row {
                assert!((c as f64 - draws as f64 / 3.0).abs() < 4.0 * sigma);
            }
        }
    }

    #[test]
    fn deterministic_for_fixed_seed_and_workers() {
        let c = cfg(5000, 7).workers(3);
        let a = estimate(Quantity::T, 4, &c).unwrap();
        let b = estimate(Quantity::T, 4, &c).unwrap();
        assert_eq!(a, b);
        let mut r1 = worker_rng(9, 0);
        let mut r2 = worker_rng(9, 0);
        for _ in 0..20 {
            assert_eq!(random_transformation(6, &mut r1), random_transformation(6, &mut r2));
        }
    }

    #[test]
    fn intervals_bracket_and_clamp() {
        for kind in [Interval::Normal, Interval::Wilson] {
            for (s, n) in [(0, 10), (10, 10), (3, 10), (500, 1000)] {
                let (lo, hi) = interval(s, n, kind);
                let p = s as f64 / n as f64;
                assert!((0.0..=p).contains(&lo) && (p..=1.0).contains(&hi));
            }
        }
    }

    #[test]
    fn small_degree_estimates_match_exact() {
        let c = cfg(100_000, 11).workers(4);
        for (q, n, exact) in [
            (Quantity::G, 4, exact_g(4).unwrap()),
            (Quantity::T, 3, exact_t(3).unwrap()),
            (Quantity::V, 3, exact_v(3).unwrap()),
        ] {
            let e = estimate(q, n, &c).unwrap();
            let p = to_f64(&exact);
            let sigma = (p * (1.0 - p) / e.samples as f64).sqrt();
            assert!((e.p_hat - p).abs() <= 3.0 * sigma, "{q:?}: {} vs {p}", e.p_hat);
        }
    }

    #[test]
    fn sufficient_event_excludes_group_generators() {
        // Sharing samples: the same stream drives both events.
        let (n, k) = (4, 2);
        let mut rng = worker_rng(5, 0);
        let (mut suff, mut no_group) = (0, 0);
        for _ in 0..5000 {
            let gens: Vec<_> = (0..k).map(|_| random_transformation(n, &mut rng)).collect();
            let s = satisfies_sufficient_condition(&gens).unwrap();
            let ng = gens.iter().all(|g| !g.is_group_generator());
            assert!(!s || ng);
            suff += s as u32;
            no_group += ng as u32;
        }
        assert!(suff <= no_group);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(estimate(Quantity::G, 0, &cfg(10, 0)).is_err());
        assert!(estimate(Quantity::G, 3, &cfg(0, 0)).is_err());
        assert!(estimate(Quantity::Suff, 3, &cfg(10, 0)).is_err());
        assert!(estimate_sufficient(3, 0, &cfg(10, 0)).is_err());
        assert_eq!("suff".parse::<Quantity>().unwrap(), Quantity::Suff);
        assert!("X".parse::<Quantity>().is_err());
    }
}
