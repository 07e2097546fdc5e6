//! JSON exchange formats.
//!
//! * matrix: `{"dim": d, "entries": [[[re, im], …], …]}` row-major
//! * exponent matrix: `{"dim": d, "exponents": [[e, …], …]}`
//! * state: a matrix object plus `"role": "state"`
//! * basis: `{"dim": d, "operators": [matrix, …]}` holding the `E_i*`
//! * spectra: plain arrays; diagonal unitaries: arrays of phases

use std::path::Path;

use serde::de::{DeserializeOwned, Error as _};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SwapError};
use crate::kernel::{ComplexMatrix, DiagonalUnitary, ExponentMatrix};
use crate::measurements::MeasurementBasis;
use crate::scalar::{Complex, Real};
use crate::states::{BipartiteState, DiagonalSpectrum};

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    role: Option<String>,
}

impl MatrixJson {
    fn from_matrix<T: Real>(m: &ComplexMatrix<T>, role: Option<&str>) -> Self {
        MatrixJson {
            dim: m.dim(),
            entries: m.to_rows().iter().map(|r| r.iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect()).collect(),
            role: role.map(str::to_owned),
        }
    }

    fn into_matrix<T: Real>(self) -> Result<ComplexMatrix<T>> {
        let rows: Vec<Vec<Complex<T>>> =
            self.entries.iter().map(|r| r.iter().map(|&[re, im]| Complex::new(T::lit(re), T::lit(im))).collect()).collect();
        let m = ComplexMatrix::from_rows(rows)?;
        if m.dim() != self.dim {
            return Err(SwapError::Dimension(format!("declared dim {} but entries are {}x{}", self.dim, m.dim(), m.dim())));
        }
        Ok(m)
    }
}

impl<T: Real> Serialize for ComplexMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(self, None).serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for ComplexMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MatrixJson::deserialize(d)?.into_matrix().map_err(D::Error::custom)
    }
}

impl Serialize for ExponentMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExponentMatrix", 2)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("exponents", &self.to_rows())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ExponentMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            exponents: Vec<Vec<u32>>,
        }
        let raw = Raw::deserialize(d)?;
        let m = ExponentMatrix::from_rows(&raw.exponents).map_err(D::Error::custom)?;
        if m.dim() != raw.dim {
            return Err(D::Error::custom(format!("declared dim {} but exponents are {}x{}", raw.dim, m.dim(), m.dim())));
        }
        Ok(m)
    }
}

impl<T: Real> Serialize for BipartiteState<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(self.coeff(), Some("state")).serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for BipartiteState<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.role.as_deref().is_some_and(|r| r != "state") {
            return Err(D::Error::custom(format!("expected role \"state\", got {:?}", raw.role)));
        }
        BipartiteState::new(raw.into_matrix().map_err(D::Error::custom)?).map_err(D::Error::custom)
    }
}

impl<T: Real> Serialize for DiagonalSpectrum<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.values().iter().map(|x| x.as_f64()))
    }
}

impl<'de, T: Real> Deserialize<'de> for DiagonalSpectrum<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        DiagonalSpectrum::new(v.into_iter().map(T::lit).collect()).map_err(D::Error::custom)
    }
}

impl<T: Real> Serialize for DiagonalUnitary<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.phases().iter().map(|x| x.as_f64()))
    }
}

impl<'de, T: Real> Deserialize<'de> for DiagonalUnitary<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(DiagonalUnitary::new(Vec::<f64>::deserialize(d)?.into_iter().map(T::lit).collect()))
    }
}

impl<T: Real> Serialize for MeasurementBasis<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MeasurementBasis", 2)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("operators", self.starred_operators())?;
        st.end()
    }
}

impl<'de, T: Real> Deserialize<'de> for MeasurementBasis<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound = "")]
        struct Raw<T: Real> {
            dim: usize,
            operators: Vec<ComplexMatrix<T>>,
        }
        let raw = Raw::<T>::deserialize(d)?;
        MeasurementBasis::new(raw.dim, raw.operators).map_err(D::Error::custom)
    }
}

pub fn to_json<V: Serialize + ?Sized>(value: &V) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| SwapError::Parse(e.to_string()))
}

pub fn from_json<V: DeserializeOwned>(text: &str) -> Result<V> {
    serde_json::from_str(text).map_err(|e| SwapError::Parse(e.to_string()))
}

pub fn read_json<V: DeserializeOwned>(path: &Path) -> Result<V> {
    let text = std::fs::read_to_string(path).map_err(|e| SwapError::Parse(format!("{}: {e}", path.display())))?;
    from_json(&text)
}

/// Writes pretty JSON with a trailing newline.
pub fn write_json<V: Serialize + ?Sized>(path: &Path, value: &V) -> Result<()> {
    let mut text = to_json(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| SwapError::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{fourier, fourier_unitary};
    use crate::measurements::gour_basis;

    #[test]
    fn matrix_round_trip() {
        let m = fourier_unitary::<f64>(3);
        let back: ComplexMatrix<f64> = from_json(&to_json(&m).unwrap()).unwrap();
        assert!(back.approx_eq(&m, 0.0));
        let v: serde_json::Value = serde_json::from_str(&to_json(&m).unwrap()).unwrap();
        assert_eq!(v["dim"], 3);
        assert_eq!(v["entries"][1][1].as_array().unwrap().len(), 2);
    }

    #[test]
    fn malformed_matrices_rejected() {
        assert!(from_json::<ComplexMatrix<f64>>(r#"{"dim":2,"entries":[[[1,0],[0,0]]]}"#).is_err());
        assert!(from_json::<ComplexMatrix<f64>>(r#"{"dim":3,"entries":[[[1,0]]]}"#).is_err());
    }

    #[test]
    fn exponent_and_state_formats() {
        let e = fourier(3);
        let text = to_json(&e).unwrap();
        assert!(text.contains("\"exponents\""));
        assert_eq!(from_json::<ExponentMatrix>(&text).unwrap(), e);
        assert!(from_json::<ExponentMatrix>(r#"{"dim":2,"exponents":[[0,0],[0,2]]}"#).is_err());

        let s = DiagonalSpectrum::<f64>::from_probabilities(&[0.6, 0.4]).unwrap().to_state();
        let text = to_json(&s).unwrap();
        assert!(text.contains("\"role\": \"state\""));
        assert_eq!(from_json::<BipartiteState<f64>>(&text).unwrap(), s);
    }

    #[test]
    fn basis_and_spectrum_formats() {
        let b = gour_basis(&fourier_unitary::<f64>(2)).unwrap();
        let back: MeasurementBasis<f64> = from_json(&to_json(&b).unwrap()).unwrap();
        assert!(back.starred(3).approx_eq(b.starred(3), 1e-15));
        assert!(from_json::<MeasurementBasis<f64>>(r#"{"dim":2,"operators":[]}"#).is_err());

        let sp = DiagonalSpectrum::<f64>::maximal(2);
        assert!(to_json(&sp).unwrap().starts_with('['));
        assert!(from_json::<DiagonalSpectrum<f64>>("[0.6, 0.8]").is_err());
    }
}
