//! Random and constructed test distributions for the DMC schemes.
//!
//! Random draws use flat Dirichlet weights (normalized unit exponentials)
//! per conditional slice, which puts full support on every alphabet cell.

use rand::Rng;

use crate::dmc::{OneWayDistribution, TwoWayDistribution};
use crate::info::{scalar_pmf, Conditional};

fn dirichlet<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter_mut().for_each(|p| *p /= sum);
    raw
}

fn ax(spec: &[(&str, usize)]) -> Vec<(String, usize)> {
    spec.iter().map(|(n, s)| (n.to_string(), *s)).collect()
}

/// Random binary one-way distribution with full-support components.
pub fn random_oneway<R: Rng>(rng: &mut R) -> OneWayDistribution {
    random_oneway_with(rng, false)
}

/// As [`random_oneway`]; with `constant_compression` the compression block
/// ignores its inputs, making the description independent of everything.
pub fn random_oneway_with<R: Rng>(rng: &mut R, constant_compression: bool) -> OneWayDistribution {
    let px = scalar_pmf("x", dirichlet(rng, 2)).unwrap();
    let pxr = scalar_pmf("xr", dirichlet(rng, 2)).unwrap();
    let mut chan = Vec::with_capacity(16);
    for _ in 0..4 {
        chan.extend(dirichlet(rng, 4));
    }
    let channel =
        Conditional::new(ax(&[("x", 2), ("xr", 2)]), ax(&[("y", 2), ("yr", 2)]), chan).unwrap();
    let comp_probs = if constant_compression {
        let slice = dirichlet(rng, 2);
        (0..4).flat_map(|_| slice.clone()).collect()
    } else {
        (0..4).flat_map(|_| dirichlet(rng, 2)).collect()
    };
    let compression =
        Conditional::new(ax(&[("yr", 2), ("xr", 2)]), ax(&[("yh", 2)]), comp_probs).unwrap();
    OneWayDistribution::from_components(&px, &pxr, &channel, &compression).unwrap()
}

/// Random binary two-way distribution with full-support components.
pub fn random_twoway<R: Rng>(rng: &mut R) -> TwoWayDistribution {
    random_twoway_with(rng, false)
}

pub fn random_twoway_with<R: Rng>(rng: &mut R, constant_compression: bool) -> TwoWayDistribution {
    let p1 = scalar_pmf("x1", dirichlet(rng, 2)).unwrap();
    let p2 = scalar_pmf("x2", dirichlet(rng, 2)).unwrap();
    let pr = scalar_pmf("xr", dirichlet(rng, 2)).unwrap();
    let mut chan = Vec::with_capacity(64);
    for _ in 0..8 {
        chan.extend(dirichlet(rng, 8));
    }
    let channel = Conditional::new(
        ax(&[("x1", 2), ("x2", 2), ("xr", 2)]),
        ax(&[("y1", 2), ("y2", 2), ("yr", 2)]),
        chan,
    )
    .unwrap();
    let comp_probs = if constant_compression {
        let slice = dirichlet(rng, 2);
        (0..4).flat_map(|_| slice.clone()).collect()
    } else {
        (0..4).flat_map(|_| dirichlet(rng, 2)).collect()
    };
    let compression =
        Conditional::new(ax(&[("xr", 2), ("yr", 2)]), ax(&[("yh", 2)]), comp_probs).unwrap();
    TwoWayDistribution::from_components(&p1, &p2, &pr, &channel, &compression).unwrap()
}

fn flip(p: f64, bit: usize, value: usize) -> f64 {
    if bit == value {
        1.0 - p
    } else {
        p
    }
}

/// Fully user-symmetric binary construction:
/// `Y1 = (X2 or Xr) xor N(p)`, `Y2 = (X1 or Xr) xor N(p)`,
/// `Yr = (X1 xor X2) xor N(q)`, `Yh = Yr xor N(q)`.
pub fn symmetric_twoway(p: f64, q: f64) -> TwoWayDistribution {
    let uni = |name: &str| scalar_pmf(name, vec![0.5, 0.5]).unwrap();
    let mut chan = vec![0.0; 8 * 8];
    for x1 in 0..2usize {
        for x2 in 0..2usize {
            for xr in 0..2usize {
                for y1 in 0..2usize {
                    for y2 in 0..2usize {
                        for yr in 0..2usize {
                            let g = (x1 * 2 + x2) * 2 + xr;
                            let o = (y1 * 2 + y2) * 2 + yr;
                            chan[g * 8 + o] = flip(p, x2 | xr, y1)
                                * flip(p, x1 | xr, y2)
                                * flip(q, x1 ^ x2, yr);
                        }
                    }
                }
            }
        }
    }
    let channel = Conditional::new(
        ax(&[("x1", 2), ("x2", 2), ("xr", 2)]),
        ax(&[("y1", 2), ("y2", 2), ("yr", 2)]),
        chan,
    )
    .unwrap();
    let mut comp = vec![0.0; 4 * 2];
    for xr in 0..2usize {
        for yr in 0..2usize {
            for yh in 0..2usize {
                comp[(xr * 2 + yr) * 2 + yh] = flip(q, yr, yh);
            }
        }
    }
    let compression =
        Conditional::new(ax(&[("xr", 2), ("yr", 2)]), ax(&[("yh", 2)]), comp).unwrap();
    TwoWayDistribution::from_components(&uni("x1"), &uni("x2"), &uni("xr"), &channel, &compression)
        .unwrap()
}

/// Relay outputs unused by the channel and a description independent of
/// everything: both relaxed-decoding boundary brackets are exactly zero.
pub fn silent_relay_twoway() -> TwoWayDistribution {
    let uni = |name: &str| scalar_pmf(name, vec![0.5, 0.5]).unwrap();
    let mut chan = vec![0.0; 8 * 8];
    for x1 in 0..2usize {
        for x2 in 0..2usize {
            for xr in 0..2usize {
                for y1 in 0..2usize {
                    for y2 in 0..2usize {
                        for yr in 0..2usize {
                            let g = (x1 * 2 + x2) * 2 + xr;
                            let o = (y1 * 2 + y2) * 2 + yr;
                            chan[g * 8 + o] =
                                flip(0.1, x2, y1) * flip(0.1, x1, y2) * flip(0.2, x1 ^ x2, yr);
                        }
                    }
                }
            }
        }
    }
    let channel = Conditional::new(
        ax(&[("x1", 2), ("x2", 2), ("xr", 2)]),
        ax(&[("y1", 2), ("y2", 2), ("yr", 2)]),
        chan,
    )
    .unwrap();
    let compression = Conditional::new(
        ax(&[("xr", 2), ("yr", 2)]),
        ax(&[("yh", 2)]),
        vec![0.5; 8],
    )
    .unwrap();
    TwoWayDistribution::from_components(&uni("x1"), &uni("x2"), &uni("xr"), &channel, &compression)
        .unwrap()
}

/// Asymmetric construction where joint decoding is feasible but binning is
/// not: the description carries the input sum almost verbatim while user 2
/// sees the relay through a much noisier link than user 1 does.
///
/// `Y1 = Xr xor N(0.05)`, `Y2 = Xr xor N(0.2)`, `Yr = (X1 xor X2) xor N(0.05)`,
/// `Yh = Yr xor N(0.05)`.
pub fn binning_infeasible_twoway() -> TwoWayDistribution {
    let uni = |name: &str| scalar_pmf(name, vec![0.5, 0.5]).unwrap();
    let mut chan = vec![0.0; 8 * 8];
    for x1 in 0..2usize {
        for x2 in 0..2usize {
            for xr in 0..2usize {
                for y1 in 0..2usize {
                    for y2 in 0..2usize {
                        for yr in 0..2usize {
                            let g = (x1 * 2 + x2) * 2 + xr;
                            let o = (y1 * 2 + y2) * 2 + yr;
                            chan[g * 8 + o] = flip(0.05, xr, y1)
                                * flip(0.2, xr, y2)
                                * flip(0.05, x1 ^ x2, yr);
                        }
                    }
                }
            }
        }
    }
    let channel = Conditional::new(
        ax(&[("x1", 2), ("x2", 2), ("xr", 2)]),
        ax(&[("y1", 2), ("y2", 2), ("yr", 2)]),
        chan,
    )
    .unwrap();
    let mut comp = vec![0.0; 8];
    for xr in 0..2usize {
        for yr in 0..2usize {
            for yh in 0..2usize {
                comp[(xr * 2 + yr) * 2 + yh] = flip(0.05, yr, yh);
            }
        }
    }
    let compression =
        Conditional::new(ax(&[("xr", 2), ("yr", 2)]), ax(&[("yh", 2)]), comp).unwrap();
    TwoWayDistribution::from_components(&uni("x1"), &uni("x2"), &uni("xr"), &channel, &compression)
        .unwrap()
}

/// Strong relay-to-user links with a weakly informative description, so the
/// relaxed-decoding boundary brackets come out nonnegative.
pub fn random_twoway_strong_relay<R: Rng>(rng: &mut R) -> TwoWayDistribution {
    let uni = |name: &str| scalar_pmf(name, vec![0.5, 0.5]).unwrap();
    let e1: f64 = rng.gen_range(0.01..0.10);
    let e2: f64 = rng.gen_range(0.01..0.10);
    let er: f64 = rng.gen_range(0.05..0.30);
    let mix: f64 = rng.gen_range(0.6..0.95);
    let mut chan = vec![0.0; 8 * 8];
    for x1 in 0..2usize {
        for x2 in 0..2usize {
            for xr in 0..2usize {
                for y1 in 0..2usize {
                    for y2 in 0..2usize {
                        for yr in 0..2usize {
                            let g = (x1 * 2 + x2) * 2 + xr;
                            let o = (y1 * 2 + y2) * 2 + yr;
                            chan[g * 8 + o] = flip(e1, xr, y1)
                                * flip(e2, xr, y2)
                                * flip(er, x1 ^ x2, yr);
                        }
                    }
                }
            }
        }
    }
    let channel = Conditional::new(
        ax(&[("x1", 2), ("x2", 2), ("xr", 2)]),
        ax(&[("y1", 2), ("y2", 2), ("yr", 2)]),
        chan,
    )
    .unwrap();
    // description = uniform with probability `mix`, else the raw relay output
    let mut comp = vec![0.0; 8];
    for xr in 0..2usize {
        for yr in 0..2usize {
            for yh in 0..2usize {
                let faithful = if yh == yr { 1.0 } else { 0.0 };
                comp[(xr * 2 + yr) * 2 + yh] = mix * 0.5 + (1.0 - mix) * faithful;
            }
        }
    }
    let compression =
        Conditional::new(ax(&[("xr", 2), ("yr", 2)]), ax(&[("yh", 2)]), comp).unwrap();
    TwoWayDistribution::from_components(&uni("x1"), &uni("x2"), &uni("xr"), &channel, &compression)
        .unwrap()
}
