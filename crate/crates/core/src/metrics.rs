//! Trajectory error measures.
//!
//! The candidate is linearly resampled onto the reference times that fall
//! inside its own time support; reference rows outside that overlap are
//! ignored.

use crate::error::{Error, Result};
use crate::output::ModelOutput;
use crate::signal::Signal;

/// Pointwise differences `candidate − reference` over the overlap.
pub fn residuals(reference: &Signal, candidate: &Signal) -> Result<Vec<f64>> {
    let (lo, hi) = (candidate.first_time(), candidate.last_time());
    let d: Vec<f64> = reference
        .times()
        .iter()
        .zip(reference.values())
        .filter(|(t, _)| (lo..=hi).contains(*t))
        .map(|(&t, &y)| candidate.value_at(t) - y)
        .collect();
    if d.is_empty() {
        return Err(Error::EmptyOverlap);
    }
    Ok(d)
}

/// Root-mean-square deviation `e2`.
pub fn rms_error(reference: &Signal, candidate: &Signal) -> Result<f64> {
    let d = residuals(reference, candidate)?;
    Ok((d.iter().map(|x| x * x).sum::<f64>() / d.len() as f64).sqrt())
}

/// Maximum absolute deviation `e∞`.
pub fn max_error(reference: &Signal, candidate: &Signal) -> Result<f64> {
    let d = residuals(reference, candidate)?;
    Ok(d.iter().fold(0.0, |m, x| m.max(x.abs())))
}

/// `(e2, e∞)` of one column shared by two model outputs.
pub fn column_errors(reference: &ModelOutput, candidate: &ModelOutput, column: &str) -> Result<(f64, f64)> {
    let r = reference.series(column)?;
    let c = candidate.series(column)?;
    Ok((rms_error(&r, &c)?, max_error(&r, &c)?))
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::signal::SignalKind;

    fn sig(y: &[f64]) -> Signal {
        let t = (0..y.len()).map(|k| k as f64).collect();
        Signal::new("x", SignalKind::Temperature, t, y.to_vec()).unwrap()
    }

    #[test]
    fn hand_values() {
        assert_relative_eq!(rms_error(&sig(&[1., 2., 3.]), &sig(&[1., 2., 5.])).unwrap(), (4.0f64 / 3.0).sqrt());
        assert_eq!(max_error(&sig(&[1., 2.]), &sig(&[0., 0.])).unwrap(), 2.0);
        assert_eq!(rms_error(&sig(&[1., 2.]), &sig(&[1., 2.])).unwrap(), 0.0);
    }

    #[test]
    fn disjoint_support_is_an_error() {
        let a = Signal::new("a", SignalKind::Temperature, vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
        let b = Signal::new("b", SignalKind::Temperature, vec![2.0, 3.0], vec![0.0, 0.0]).unwrap();
        assert!(matches!(rms_error(&a, &b), Err(Error::EmptyOverlap)));
    }
}
