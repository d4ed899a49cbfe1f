use crate::error::{Error, Result};
use crate::ingest::AlignedPair;

use super::check_len;

/// Absolute Pearson correlation of an aligned pair, in [0, 1].
pub fn pearson_abs(pair: &AlignedPair<'_>) -> Result<f64> {
    abs_correlation(pair.xs, pair.ys)
}

pub fn abs_correlation(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_len(xs, ys)?;
    if xs.len() < crate::ingest::MIN_OVERLAP {
        return Err(Error::InsufficientSamples {
            needed: crate::ingest::MIN_OVERLAP,
            got: xs.len(),
        });
    }
    if is_constant(xs) {
        return Err(Error::DegenerateSeries { which: "first" });
    }
    if is_constant(ys) {
        return Err(Error::DegenerateSeries { which: "second" });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok((sxy.abs() / (sxx * syy).sqrt()).min(1.0))
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perfect_anti_linear() {
        assert_eq!(abs_correlation(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn hand_evaluated_value() {
        // Centred: (−1.5,−0.5,0.5,1.5)·(−1.5,0.5,−0.5,1.5) = 4, sxx = syy = 5.
        let r = abs_correlation(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_to_centred_input() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        // Centred xs = (−2,−1,0,1,2) is orthogonal to ys − 10 = (1,−2,0,−2,1).
        let ys = [11.0, 8.0, 10.0, 8.0, 11.0];
        assert!(abs_correlation(&xs, &ys).unwrap().abs() < 1e-15);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            abs_correlation(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::DegenerateSeries { which: "first" })
        ));
        assert!(matches!(
            abs_correlation(&[1.0, 2.0, 3.0], &[0.5, 0.5, 0.5]),
            Err(Error::DegenerateSeries { which: "second" })
        ));
        assert!(abs_correlation(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(abs_correlation(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    fn sample() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (3usize..30).prop_flat_map(|n| {
            (
                prop::collection::vec(-100.0f64..100.0, n),
                prop::collection::vec(-100.0f64..100.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn symmetric_and_affine_invariant(
            (xs, ys) in sample(),
            scale in 0.01f64..100.0,
            shift in -50.0f64..50.0,
        ) {
            prop_assume!(!is_constant(&xs) && !is_constant(&ys));
            let r = abs_correlation(&xs, &ys).unwrap();
            prop_assert!((0.0..=1.0).contains(&r));
            prop_assert_eq!(r, abs_correlation(&ys, &xs).unwrap());
            let xt: Vec<f64> = xs.iter().map(|x| scale * x + shift).collect();
            let yt: Vec<f64> = ys.iter().map(|y| y / scale - shift).collect();
            prop_assert!((abs_correlation(&xt, &ys).unwrap() - r).abs() < 1e-12);
            prop_assert!((abs_correlation(&xs, &yt).unwrap() - r).abs() < 1e-12);
        }
    }
}
