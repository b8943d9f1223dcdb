//! Seeded synthetic data generators.
//!
//! Three families of test signals with a known transition: a noisy Henon
//! map whose control parameter ramps from regular into chaotic dynamics, a
//! white noise ramp whose standard deviation steps upward, and clouds of
//! Gaussian rows whose precision is drawn from a Gamma mixture that widens
//! over time. All draws come from ChaCha12; a fixed (seed, stream) pair
//! fully determines the output on every platform.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::error::Error;
use crate::geometry::PointCloud;

/// Generator identity recorded in run metadata alongside the seed.
pub const RNG_ALGORITHM: &str = "chacha12";

/// A ChaCha12 generator on an independent stream: draws never overlap
/// between distinct streams of the same seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn ensure(cond: bool, msg: &str) -> Result<(), Error> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidConfig(alloc::string::String::from(msg)))
    }
}

/// Noisy Henon map with a linearly ramping control parameter.
///
/// Iterates `x' = 1 - a x^2 + b y + s`, `y' = x + s'` where `s` and `s'`
/// are `sigma * W * sqrt(dt)` noise kicks, `W` standard normal. With
/// `independent_noise` the two kicks use separate draws, otherwise one
/// draw feeds both. The parameter starts at `a_start` and grows by `dt`
/// per step until it reaches `a_end`.
#[derive(Debug, Clone, PartialEq)]
pub struct HenonConfig {
    pub b: f64,
    pub sigma: f64,
    pub dt: f64,
    pub a_start: f64,
    pub a_end: f64,
    pub seed: u64,
    pub stream: u64,
    pub independent_noise: bool,
}

impl Default for HenonConfig {
    fn default() -> Self {
        HenonConfig {
            b: 0.3,
            sigma: 0.1,
            dt: 2.8e-4,
            a_start: 0.0,
            a_end: 1.4,
            seed: 0,
            stream: 0,
            independent_noise: false,
        }
    }
}

/// Output of the Henon generator: the x series, the parameter value in
/// effect when each sample was produced, and the indices of steps where a
/// diverging orbit was restarted near the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct HenonSeries {
    pub x: Vec<f64>,
    pub a: Vec<f64>,
    pub restarts: Vec<usize>,
}

/// The attracting fixed point x* of the noise-free map at parameter `a`,
/// the positive root of `a x^2 + (1 - b) x - 1 = 0`.
pub fn henon_fixed_point(a: f64, b: f64) -> f64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    let c = 1.0 - b;
    if a == 0.0 {
        return 1.0 / c;
    }
    (-c + (c * c + 4.0 * a).sqrt()) / (2.0 * a)
}

/// Runs the noisy Henon map across the parameter ramp. The series has
/// `ceil((a_end - a_start) / dt)` samples. Orbits that blow past |x| > 10
/// are restarted uniformly in [-0.1, 0.1]^2 and recorded in `restarts`;
/// the parameter keeps ramping through a restart.
pub fn noisy_henon(cfg: &HenonConfig) -> Result<HenonSeries, Error> {
    #[allow(unused_imports)]
    use num_traits::Float;
    ensure(cfg.b.is_finite(), "b must be finite")?;
    ensure(
        cfg.sigma.is_finite() && cfg.sigma >= 0.0,
        "sigma must be finite and >= 0",
    )?;
    ensure(
        cfg.dt.is_finite() && cfg.dt > 0.0,
        "dt must be finite and > 0",
    )?;
    ensure(
        cfg.a_start.is_finite() && cfg.a_end.is_finite() && cfg.a_start < cfg.a_end,
        "parameter ramp needs a_start < a_end",
    )?;
    let n_steps = ((cfg.a_end - cfg.a_start) / cfg.dt).ceil() as usize;
    ensure(n_steps >= 1, "ramp shorter than one step")?;

    let mut rng = stream_rng(cfg.seed, cfg.stream);
    let normal = Normal::new(0.0, 1.0).expect("unit normal is valid");
    let kick = cfg.sigma * cfg.dt.sqrt();

    let mut series = HenonSeries {
        x: Vec::with_capacity(n_steps),
        a: Vec::with_capacity(n_steps),
        restarts: Vec::new(),
    };
    let (mut x, mut y) = (0.0_f64, 0.0_f64);
    for n in 0..n_steps {
        let a = cfg.a_start + cfg.dt * n as f64;
        let s = kick * normal.sample(&mut rng);
        let s2 = if cfg.independent_noise {
            kick * normal.sample(&mut rng)
        } else {
            s
        };
        let mut nx = 1.0 - a * x * x + cfg.b * y + s;
        let mut ny = x + s2;
        if !nx.is_finite() || nx.abs() > 10.0 {
            series.restarts.push(n);
            nx = rng.random_range(-0.1..=0.1);
            ny = rng.random_range(-0.1..=0.1);
        }
        x = nx;
        y = ny;
        series.x.push(x);
        series.a.push(a);
    }
    Ok(series)
}

/// White noise clouds with stepwise increasing standard deviation.
///
/// For every realization and every level `sigma`, a cloud of `points` rows
/// in `R^dim` is drawn, each column scaled by its own jittered deviation
/// `sigma + U[-jitter, jitter]`. Realization `r` uses stream `r`, so any
/// subset of realizations can be regenerated independently.
#[derive(Debug, Clone, PartialEq)]
pub struct WhiteNoiseConfig {
    pub sigma_levels: Vec<f64>,
    pub points: usize,
    pub dim: usize,
    pub jitter: f64,
    pub realizations: usize,
    pub seed: u64,
}

impl Default for WhiteNoiseConfig {
    fn default() -> Self {
        WhiteNoiseConfig {
            sigma_levels: (1..=10).map(|s| s as f64).collect(),
            points: 100,
            dim: 4,
            jitter: 0.1,
            realizations: 100,
            seed: 0,
        }
    }
}

/// One generated white noise cloud and the deviations that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct WhiteNoiseCloud {
    pub realization: usize,
    pub level_index: usize,
    pub sigma: f64,
    pub column_sigmas: Vec<f64>,
    pub cloud: PointCloud,
}

/// Generates all realizations of the white noise ramp, ordered by
/// realization then level.
pub fn white_noise_ramp(cfg: &WhiteNoiseConfig) -> Result<Vec<WhiteNoiseCloud>, Error> {
    ensure(
        !cfg.sigma_levels.is_empty(),
        "at least one sigma level required",
    )?;
    ensure(
        cfg.jitter.is_finite() && cfg.jitter >= 0.0,
        "jitter must be finite and >= 0",
    )?;
    for s in &cfg.sigma_levels {
        ensure(
            s.is_finite() && *s > cfg.jitter,
            "every sigma level must exceed the jitter",
        )?;
    }
    ensure(cfg.points >= 1, "points must be >= 1")?;
    ensure(cfg.dim >= 1, "dim must be >= 1")?;
    ensure(cfg.realizations >= 1, "realizations must be >= 1")?;

    let mut out = Vec::with_capacity(cfg.realizations * cfg.sigma_levels.len());
    for r in 0..cfg.realizations {
        let mut rng = stream_rng(cfg.seed, r as u64);
        for (level_index, &sigma) in cfg.sigma_levels.iter().enumerate() {
            let column_sigmas: Vec<f64> = (0..cfg.dim)
                .map(|_| {
                    if cfg.jitter > 0.0 {
                        sigma + rng.random_range(-cfg.jitter..=cfg.jitter)
                    } else {
                        sigma
                    }
                })
                .collect();
            let normals: Vec<Normal<f64>> = column_sigmas
                .iter()
                .map(|&s| Normal::new(0.0, s).expect("validated deviation"))
                .collect();
            let mut data = Vec::with_capacity(cfg.points * cfg.dim);
            for _ in 0..cfg.points {
                for normal in &normals {
                    data.push(normal.sample(&mut rng));
                }
            }
            out.push(WhiteNoiseCloud {
                realization: r,
                level_index,
                sigma,
                column_sigmas,
                cloud: PointCloud::from_flat(data, cfg.dim)?,
            });
        }
    }
    Ok(out)
}

/// Gaussian clouds whose row precisions come from a Gamma mixture.
///
/// At step t a pool of `precision_set_size` precisions is drawn from
/// Gamma(alpha_t, rate beta). Each of the cloud's rows picks one pool
/// entry gamma uniformly and samples its `dim` coordinates from
/// N(0, gamma^-1/2). Lowering alpha over the schedule widens the variance
/// mixture, mimicking a system drifting out of equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaConfig {
    pub alpha_schedule: Vec<f64>,
    /// Rate parameter of the Gamma law.
    pub beta: f64,
    pub dim: usize,
    pub points_per_cloud: usize,
    pub precision_set_size: usize,
    pub seed: u64,
    pub stream: u64,
}

impl Default for GammaConfig {
    fn default() -> Self {
        GammaConfig {
            alpha_schedule: default_alpha_schedule(),
            beta: 1.0,
            dim: 4,
            points_per_cloud: 100,
            precision_set_size: 100,
            seed: 0,
            stream: 0,
        }
    }
}

/// The standard 100-step schedule: alpha holds at 8 for 75 steps, then
/// falls by 0.25 per step down to 1.75.
pub fn default_alpha_schedule() -> Vec<f64> {
    (0..100)
        .map(|i| {
            if i < 75 {
                8.0
            } else {
                8.0 - 0.25 * (i - 74) as f64
            }
        })
        .collect()
}

/// One generated Gamma-modulated cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaCloud {
    pub step: usize,
    pub alpha: f64,
    pub cloud: PointCloud,
}

fn precision_set(
    rng: &mut ChaCha12Rng,
    size: usize,
    alpha: f64,
    beta: f64,
) -> Result<Vec<f64>, Error> {
    let gamma = Gamma::new(alpha, 1.0 / beta)
        .map_err(|_| Error::InvalidConfig(alloc::string::String::from("invalid gamma shape")))?;
    Ok((0..size).map(|_| gamma.sample(rng)).collect())
}

/// Generates one cloud per schedule step, in step order.
pub fn gamma_modulated_clouds(cfg: &GammaConfig) -> Result<Vec<GammaCloud>, Error> {
    #[allow(unused_imports)]
    use num_traits::Float;
    ensure(
        !cfg.alpha_schedule.is_empty(),
        "alpha schedule must not be empty",
    )?;
    for a in &cfg.alpha_schedule {
        ensure(
            a.is_finite() && *a > 0.0,
            "every alpha must be finite and > 0",
        )?;
    }
    ensure(
        cfg.beta.is_finite() && cfg.beta > 0.0,
        "beta must be finite and > 0",
    )?;
    ensure(cfg.dim >= 1, "dim must be >= 1")?;
    ensure(cfg.points_per_cloud >= 1, "points_per_cloud must be >= 1")?;
    ensure(
        cfg.precision_set_size >= 1,
        "precision_set_size must be >= 1",
    )?;

    let mut rng = stream_rng(cfg.seed, cfg.stream);
    let unit = Normal::new(0.0, 1.0).expect("unit normal is valid");
    let mut out = Vec::with_capacity(cfg.alpha_schedule.len());
    for (step, &alpha) in cfg.alpha_schedule.iter().enumerate() {
        let pool = precision_set(&mut rng, cfg.precision_set_size, alpha, cfg.beta)?;
        let mut data = Vec::with_capacity(cfg.points_per_cloud * cfg.dim);
        for _ in 0..cfg.points_per_cloud {
            let gamma = pool[rng.random_range(0..pool.len())];
            let sigma = 1.0 / gamma.sqrt();
            for _ in 0..cfg.dim {
                data.push(sigma * unit.sample(&mut rng));
            }
        }
        out.push(GammaCloud {
            step,
            alpha,
            cloud: PointCloud::from_flat(data, cfg.dim)?,
        });
    }
    Ok(out)
}
