//! Point estimators that impute interval observations before computing the
//! Gini coefficient. They serve as comparison baselines for the bounds.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::index::gini;
use crate::types::{IntervalObservation, SortedSample};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaselineMethod {
    /// Discard interval observations.
    Drop,
    /// Replace an interval by the mean of the point values inside it.
    MeanImpute,
    /// Replace an interval by its midpoint.
    MidpointImpute,
    /// Replace an interval by one uniformly drawn point donor inside it.
    HotDeck { seed: u64 },
    /// Average of `draws` independent hot-deck Ginis.
    HotDeckMulti { draws: usize, seed: u64 },
}

impl BaselineMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BaselineMethod::Drop => "drop",
            BaselineMethod::MeanImpute => "mean_impute",
            BaselineMethod::MidpointImpute => "midpoint_impute",
            BaselineMethod::HotDeck { .. } => "hotdeck",
            BaselineMethod::HotDeckMulti { .. } => "hotdeck_multi",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineReport {
    pub estimate: f64,
    pub points: usize,
    pub intervals: usize,
    /// Intervals imputed from the whole point pool because no donor fell inside.
    pub fallbacks: usize,
    /// Per-draw Ginis for the hot-deck methods.
    pub draws: Vec<f64>,
}

pub fn baseline_gini(data: &[IntervalObservation], method: BaselineMethod) -> Result<BaselineReport> {
    let points: Vec<f64> = data.iter().filter(|o| o.is_point()).map(|o| o.lower()).collect();
    let intervals: Vec<IntervalObservation> = data.iter().filter(|o| !o.is_point()).copied().collect();
    let mut report = BaselineReport {
        estimate: f64::NAN,
        points: points.len(),
        intervals: intervals.len(),
        fallbacks: 0,
        draws: Vec::new(),
    };
    if points.is_empty() && !matches!(method, BaselineMethod::MidpointImpute) {
        return Err(Error::NoPointData);
    }
    let complete = |imputed: Vec<f64>| -> Result<f64> {
        let mut all = points.clone();
        all.extend(imputed);
        gini(&SortedSample::new(all)?)
    };
    match method {
        BaselineMethod::Drop => {
            report.estimate = gini(&SortedSample::new(points.clone())?)?;
        }
        BaselineMethod::MidpointImpute => {
            report.estimate = complete(intervals.iter().map(|o| o.midpoint()).collect())?;
        }
        BaselineMethod::MeanImpute => {
            let overall = points.iter().sum::<f64>() / points.len() as f64;
            let mut imputed = Vec::with_capacity(intervals.len());
            for o in &intervals {
                let inside: Vec<f64> = points.iter().copied().filter(|&v| o.contains(v)).collect();
                if inside.is_empty() {
                    report.fallbacks += 1;
                    imputed.push(overall);
                } else {
                    imputed.push(inside.iter().sum::<f64>() / inside.len() as f64);
                }
            }
            report.estimate = complete(imputed)?;
        }
        BaselineMethod::HotDeck { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (imputed, fallbacks) = hot_deck_draw(&points, &intervals, &mut rng);
            report.fallbacks = fallbacks;
            report.estimate = complete(imputed)?;
            report.draws.push(report.estimate);
        }
        BaselineMethod::HotDeckMulti { draws, seed } => {
            if draws == 0 {
                return Err(Error::InvalidInput("hot-deck needs at least one draw".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..draws {
                let (imputed, fallbacks) = hot_deck_draw(&points, &intervals, &mut rng);
                report.fallbacks += fallbacks;
                report.draws.push(complete(imputed)?);
            }
            report.estimate = report.draws.iter().sum::<f64>() / draws as f64;
        }
    }
    Ok(report)
}

fn hot_deck_draw(points: &[f64], intervals: &[IntervalObservation], rng: &mut ChaCha8Rng) -> (Vec<f64>, usize) {
    let mut fallbacks = 0;
    let imputed = intervals
        .iter()
        .map(|o| {
            let donors: Vec<f64> = points.iter().copied().filter(|&v| o.contains(v)).collect();
            match donors.choose(rng) {
                Some(&v) => v,
                None => {
                    fallbacks += 1;
                    *points.choose(rng).expect("point pool checked non-empty")
                }
            }
        })
        .collect();
    (imputed, fallbacks)
}
