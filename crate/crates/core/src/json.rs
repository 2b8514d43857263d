//! Serde adapters: vectors as flat arrays, matrices as arrays of rows,
//! complex numbers as `[re, im]` pairs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

pub mod vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &DVector<f64>, s: S) -> Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DVector<f64>, D::Error> {
        Ok(DVector::from_vec(Vec::<f64>::deserialize(d)?))
    }
}

pub mod vectors {
    use super::*;

    pub fn serialize<S: Serializer>(vs: &[DVector<f64>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[f64]> = vs.iter().map(|v| v.as_slice()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<DVector<f64>>, D::Error> {
        Ok(Vec::<Vec<f64>>::deserialize(d)?.into_iter().map(DVector::from_vec).collect())
    }
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub mod complex_vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &DVector<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(pair).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DVector<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(DVector::from_iterator(raw.len(), raw.iter().map(|p| Complex64::new(p[0], p[1]))))
    }
}

pub mod complex_vectors {
    use super::*;

    pub fn serialize<S: Serializer>(vs: &[DVector<Complex64>], s: S) -> Result<S::Ok, S::Error> {
        vs.iter()
            .map(|v| v.iter().map(pair).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<DVector<Complex64>>, D::Error> {
        let raw = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|v| DVector::from_iterator(v.len(), v.iter().map(|p| Complex64::new(p[0], p[1]))))
            .collect())
    }
}

fn rows_to_matrix<T: nalgebra::Scalar + Copy, E: serde::de::Error>(rows: Vec<Vec<T>>) -> Result<DMatrix<T>, E> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(E::custom("ragged matrix rows"));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        m.row_iter()
            .map(|r| r.iter().copied().collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<f64>, D::Error> {
        rows_to_matrix(Vec::<Vec<f64>>::deserialize(d)?)
    }
}

pub mod complex_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &DMatrix<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        m.row_iter()
            .map(|r| r.iter().map(pair).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<Complex64>, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .collect();
        rows_to_matrix(rows)
    }
}

/// Parse a real vector from a JSON array.
pub fn parse_vector(text: &str) -> Result<DVector<f64>, serde_json::Error> {
    let mut de = serde_json::Deserializer::from_str(text);
    let v = vector::deserialize(&mut de)?;
    de.end()?;
    Ok(v)
}

/// Parse a complex vector: either `[re, im]` pairs or plain reals.
pub fn parse_complex_vector(text: &str) -> Result<DVector<Complex64>, serde_json::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Real(f64),
        Pair([f64; 2]),
    }
    let raw: Vec<Entry> = serde_json::from_str(text)?;
    Ok(DVector::from_iterator(
        raw.len(),
        raw.iter().map(|e| match *e {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Pair([re, im]) => Complex64::new(re, im),
        }),
    ))
}

/// Parse a real matrix given as an array of rows.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>, serde_json::Error> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(text)?;
    rows_to_matrix::<f64, serde_json::Error>(rows).map_err(serde_json::Error::custom)
}
