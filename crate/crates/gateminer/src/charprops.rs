//! Optical band-gap estimate from an absorbance peak wavelength,
//! E_g (eV) = 1240 / lambda (nm). The constant is the conventional rounded
//! hc value used as-is.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CharPropsError {
    #[error("wavelength must be positive, got {0} nm")]
    NonPositiveWavelength(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandGapResult {
    pub lambda_nm: f64,
    pub e_g_ev: f64,
}

pub fn optical_band_gap(lambda_nm: f64) -> Result<BandGapResult, CharPropsError> {
    if !(lambda_nm > 0.0) {
        return Err(CharPropsError::NonPositiveWavelength(lambda_nm));
    }
    Ok(BandGapResult {
        lambda_nm,
        e_g_ev: 1240.0 / lambda_nm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_points() {
        assert_eq!(optical_band_gap(1240.0).unwrap().e_g_ev, 1.0);
        assert_eq!(optical_band_gap(620.0).unwrap().e_g_ev, 2.0);
    }

    #[test]
    fn zno_peak() {
        let r = optical_band_gap(372.0).unwrap();
        assert!((r.e_g_ev - 3.3333).abs() / 3.3333 < 1e-4);
    }

    #[test]
    fn inverse_round_trip() {
        for x in [0.5, 1.0, 3.35, 12.0] {
            let r = optical_band_gap(1240.0 / x).unwrap();
            assert!((r.e_g_ev - x).abs() / x < 1e-12);
        }
    }

    #[test]
    fn non_positive_rejected() {
        assert_eq!(
            optical_band_gap(0.0),
            Err(CharPropsError::NonPositiveWavelength(0.0))
        );
    }
}
