use serde::{Deserialize, Serialize};

use super::Observable;
use crate::abelian::{haar_sample, seeded_rng, Character, CirclePoint, GroupKind, GroupPoint, TorusPoint};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Quadrature {
    /// Haar samples from a seeded generator.
    MonteCarlo { samples: usize, seed: u64 },
    /// Midpoint rule with `points` nodes per circle coordinate.
    Riemann { points: usize },
}

/// Estimate of `f̂(χ) = ∫ f·χ̄ dμ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierEstimate {
    pub character: Character,
    pub quadrature: Quadrature,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// Monte Carlo standard error of the complex mean; `None` for the
    /// midpoint rule.
    pub standard_error: Option<f64>,
}

pub fn fourier_coefficient(
    observable: &Observable,
    chi: &Character,
    kind: &GroupKind,
    quadrature: Quadrature,
) -> Result<FourierEstimate> {
    if !chi.accepts(kind) {
        return Err(Error::GroupMismatch(format!(
            "a {} character is not a character of the {}",
            chi.group_name(),
            kind.name()
        )));
    }
    let eval = observable.compile()?;
    let term = |g: &GroupPoint| -> Result<(f64, f64)> {
        let (fr, fi) = eval.eval(g)?.complex();
        let c = chi.eval(g)?;
        // f · conj(χ)
        let (cr, ci) = (c.re(), -c.im());
        Ok((fr * cr - fi * ci, fr * ci + fi * cr))
    };
    let (re, im, se) = match quadrature {
        Quadrature::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::Invalid("Monte Carlo needs at least two samples".into()));
            }
            let mut rng = seeded_rng(seed);
            let (mut mr, mut mi, mut m2) = (0.0, 0.0, 0.0);
            for k in 1..=samples {
                let (r, i) = term(&haar_sample(kind, &mut rng)?)?;
                let (dr, di) = (r - mr, i - mi);
                mr += dr / k as f64;
                mi += di / k as f64;
                m2 += dr * (r - mr) + di * (i - mi);
            }
            let var = m2 / (samples - 1) as f64;
            (mr, mi, Some((var / samples as f64).sqrt()))
        }
        Quadrature::Riemann { points } => {
            if points == 0 {
                return Err(Error::Invalid("the midpoint rule needs nodes".into()));
            }
            let node = |i: usize| (i as f64 + 0.5) / points as f64;
            let nodes: Vec<GroupPoint> = match kind {
                GroupKind::Circle => (0..points)
                    .map(|i| GroupPoint::Circle(CirclePoint::new(node(i))))
                    .collect(),
                GroupKind::Torus => (0..points * points)
                    .map(|i| GroupPoint::Torus(TorusPoint::new(node(i / points), node(i % points))))
                    .collect(),
                _ => {
                    return Err(Error::Invalid(format!(
                        "the midpoint rule is only available on the circle and torus, not the {}",
                        kind.name()
                    )))
                }
            };
            let (mut sr, mut si) = (0.0, 0.0);
            for g in &nodes {
                let (r, i) = term(g)?;
                sr += r;
                si += i;
            }
            let m = nodes.len() as f64;
            (sr / m, si / m, None)
        }
    };
    Ok(FourierEstimate {
        character: *chi,
        quadrature,
        re,
        im,
        abs: re.hypot(im),
        standard_error: se,
    })
}
