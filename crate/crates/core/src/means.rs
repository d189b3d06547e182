//! Harmonic and arithmetic means, plain and weighted.
//!
//! Population-weighted density is the reciprocal of a population-weighted
//! harmonic mean of inverse densities, while the matching arithmetic mean of
//! the same quantities is always `1 / OD`. The gap between the two means is
//! what makes PWD exceed OD.

use crate::error::{Error, Result};

fn check_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyValues);
    }
    for (index, &value) in values.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveValue { index, value });
        }
    }
    Ok(())
}

fn check_weights(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.len() != weights.len() {
        return Err(Error::LengthMismatch {
            values: values.len(),
            weights: weights.len(),
        });
    }
    check_values(values)?;
    let mut total = 0.0;
    for (index, &weight) in weights.iter().enumerate() {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::NegativeWeight { index, weight });
        }
        total += weight;
    }
    if total <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    Ok(total)
}

/// `N / Σ 1/x_k`.
pub fn harmonic_mean(values: &[f64]) -> Result<f64> {
    check_values(values)?;
    let reciprocal_sum: f64 = values.iter().map(|x| x.recip()).sum();
    Ok(values.len() as f64 / reciprocal_sum)
}

/// `Σ w_k / Σ (w_k / x_k)`. Zero weights drop out of both sums.
pub fn weighted_harmonic_mean(values: &[f64], weights: &[f64]) -> Result<f64> {
    let total = check_weights(values, weights)?;
    let reciprocal_sum: f64 = values
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(x, w)| w / x)
        .sum();
    Ok(total / reciprocal_sum)
}

/// `Σ w_k x_k / Σ w_k`.
pub fn weighted_arithmetic_mean(values: &[f64], weights: &[f64]) -> Result<f64> {
    let total = check_weights(values, weights)?;
    let weighted_sum: f64 = values.iter().zip(weights).map(|(x, w)| w * x).sum();
    Ok(weighted_sum / total)
}

/// Population variance (divisor `N`).
pub(crate) fn population_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx_eq_rel;
    use proptest::prelude::*;

    #[test]
    fn harmonic_mean_examples() {
        assert!(approx_eq_rel(
            harmonic_mean(&[1.0, 3.0]).unwrap(),
            1.5,
            1e-15
        ));
        assert!(approx_eq_rel(
            harmonic_mean(&[1.0, 2.0, 4.0]).unwrap(),
            12.0 / 7.0,
            1e-15
        ));
        assert_eq!(harmonic_mean(&[2.5; 7]).unwrap(), 2.5);
    }

    #[test]
    fn harmonic_mean_rejects_bad_input() {
        assert_eq!(harmonic_mean(&[]), Err(Error::EmptyValues));
        assert_eq!(
            harmonic_mean(&[1.0, 0.0]),
            Err(Error::NonPositiveValue {
                index: 1,
                value: 0.0
            })
        );
        assert!(harmonic_mean(&[-1.0]).is_err());
        assert!(harmonic_mean(&[f64::NAN]).is_err());
    }

    #[test]
    fn weighted_harmonic_examples() {
        assert!(approx_eq_rel(
            weighted_harmonic_mean(&[1.0, 3.0], &[1.0, 1.0]).unwrap(),
            1.5,
            1e-15
        ));
        // inverse densities of the three-parcel instance, population weights
        let h = weighted_harmonic_mean(&[0.5, 0.5, 2.0], &[1.0, 1.0, 1.0]).unwrap();
        assert!(approx_eq_rel(h, 2.0 / 3.0, 1e-15));
        assert!(approx_eq_rel(h.recip(), 1.5, 1e-15));
        assert_eq!(
            weighted_harmonic_mean(&[2.0, 2.0], &[5.0, 0.0]).unwrap(),
            2.0
        );
    }

    #[test]
    fn weighted_arithmetic_examples() {
        let a = weighted_arithmetic_mean(&[0.5, 0.5, 2.0], &[1.0, 1.0, 1.0]).unwrap();
        assert!(approx_eq_rel(a, 1.0, 1e-15));
        assert_eq!(
            weighted_arithmetic_mean(&[4.0, 4.0], &[1.0, 9.0]).unwrap(),
            4.0
        );
        assert!(approx_eq_rel(
            weighted_arithmetic_mean(&[1.0, 3.0], &[3.0, 1.0]).unwrap(),
            1.5,
            1e-15
        ));
    }

    #[test]
    fn weighted_errors() {
        assert_eq!(
            weighted_harmonic_mean(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch {
                values: 1,
                weights: 2
            })
        );
        assert_eq!(
            weighted_arithmetic_mean(&[1.0, 2.0], &[0.0, 0.0]),
            Err(Error::ZeroTotalWeight)
        );
        assert!(weighted_arithmetic_mean(&[1.0], &[-1.0]).is_err());
    }

    #[test]
    fn variance_uses_divisor_n() {
        assert_eq!(population_variance(&[1.0, 3.0]), 1.0);
        assert_eq!(population_variance(&[1.0, 1.0, 4.0]), 2.0);
    }

    proptest! {
        #[test]
        fn harmonic_never_exceeds_arithmetic(
            pairs in prop::collection::vec((1e-3f64..1e3, 0.0f64..10.0), 1..40)
        ) {
            let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let mut weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            weights[0] += 1.0;
            let h = weighted_harmonic_mean(&values, &weights).unwrap();
            let a = weighted_arithmetic_mean(&values, &weights).unwrap();
            prop_assert!(h <= a * (1.0 + 1e-12));
        }

        #[test]
        fn equal_values_give_equal_means(x in 1e-3f64..1e3, n in 1usize..20) {
            let values = vec![x; n];
            let weights: Vec<f64> = (1..=n).map(|k| k as f64).collect();
            let h = weighted_harmonic_mean(&values, &weights).unwrap();
            let a = weighted_arithmetic_mean(&values, &weights).unwrap();
            prop_assert!(approx_eq_rel(h, x, 1e-12));
            prop_assert!(approx_eq_rel(a, x, 1e-12));
        }

        #[test]
        fn distinct_values_give_strict_gap(x in 1e-2f64..1e2, factor in 1.01f64..10.0) {
            let values = [x, x * factor];
            let weights = [1.0, 2.0];
            let h = weighted_harmonic_mean(&values, &weights).unwrap();
            let a = weighted_arithmetic_mean(&values, &weights).unwrap();
            prop_assert!(h < a);
        }
    }
}
