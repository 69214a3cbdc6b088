//! Seeded random instances with small integer coordinates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::Hyperplane;
use crate::measure::{PointFamily, WeightedFamily};
use crate::scalar::Scalar;
use crate::solver::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Hyperplane,
    Points,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub dim: usize,
    pub families: usize,
    pub per_family: usize,
    pub seed: u64,
    /// Coordinates are drawn from `-coord_range..=coord_range`.
    pub coord_range: i64,
    pub kind: Kind,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            families: 2,
            per_family: 3,
            seed: 0,
            coord_range: 10,
            kind: Kind::Hyperplane,
        }
    }
}

/// One element: the integer covector and offset of a hyperplane, or a point
/// (with `offset` unused).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawElement {
    pub coords: Vec<i64>,
    pub offset: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawInstance {
    pub dim: usize,
    pub kind: Kind,
    pub families: Vec<Vec<RawElement>>,
}

impl RawInstance {
    pub fn guaranteed(&self) -> bool {
        self.families.len() <= self.dim
    }

    pub fn build<T: Scalar>(&self) -> Result<Instance<T>> {
        let num = |c: i64| T::from_ratio(c, 1);
        match self.kind {
            Kind::Hyperplane => {
                let fams = self
                    .families
                    .iter()
                    .enumerate()
                    .map(|(j, els)| {
                        let planes = els
                            .iter()
                            .map(|el| {
                                Hyperplane::new(
                                    el.coords.iter().map(|&c| num(c)).collect(),
                                    num(el.offset),
                                )
                            })
                            .collect::<Result<Vec<_>>>()?;
                        WeightedFamily::uniform(format!("F{j}"), planes)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Instance::hyperplane(fams)
            }
            Kind::Points => {
                let fams = self
                    .families
                    .iter()
                    .enumerate()
                    .map(|(j, els)| {
                        let pts = els
                            .iter()
                            .map(|el| el.coords.iter().map(|&c| num(c)).collect())
                            .collect();
                        PointFamily::uniform(format!("F{j}"), pts)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Instance::classical(fams)
            }
        }
    }
}

/// Deterministic in `cfg`. Covectors are redrawn until nonzero.
pub fn generate(cfg: &GenConfig) -> RawInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let r = cfg.coord_range.max(1);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<i64> {
        (0..cfg.dim).map(|_| rng.gen_range(-r..=r)).collect()
    };
    let families = (0..cfg.families)
        .map(|_| {
            (0..cfg.per_family)
                .map(|_| match cfg.kind {
                    Kind::Hyperplane => {
                        let coords = loop {
                            let c = draw(&mut rng);
                            if c.iter().any(|&x| x != 0) {
                                break c;
                            }
                        };
                        RawElement {
                            coords,
                            offset: rng.gen_range(-r..=r),
                        }
                    }
                    Kind::Points => RawElement {
                        coords: draw(&mut rng),
                        offset: 0,
                    },
                })
                .collect()
        })
        .collect();
    RawInstance {
        dim: cfg.dim,
        kind: cfg.kind,
        families,
    }
}
