//! JSON formats for states and product vectors.
//!
//! A state is `{"shape": [d1, ..., dn], "coeffs": [[re, im], ...]}` with the
//! coefficients in row-major order (last index fastest); normalization is not
//! required. Product vectors are either a bare list of factors or an object
//! `{"factors": [...]}`, each factor a list of `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{Hypermatrix, ProductTuple, UnitVector};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    shape: Vec<usize>,
    coeffs: Vec<[f64; 2]>,
}

pub fn parse_state(text: &str) -> Result<Hypermatrix> {
    let doc: StateDoc =
        serde_json::from_str(text).map_err(|e| Error::StateFormat(e.to_string()))?;
    let expected: usize = doc.shape.iter().product();
    if doc.coeffs.len() != expected {
        return Err(Error::StateFormat(format!(
            "coeffs: expected {expected} entries for shape {:?}, found {}",
            doc.shape,
            doc.coeffs.len()
        )));
    }
    Hypermatrix::new(
        doc.shape,
        doc.coeffs
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect(),
    )
}

pub fn state_to_json(h: &Hypermatrix) -> String {
    let doc = StateDoc {
        shape: h.shape().to_vec(),
        coeffs: h.coeffs().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorsDoc {
    Bare(Vec<Vec<[f64; 2]>>),
    Wrapped { factors: Vec<Vec<[f64; 2]>> },
}

/// Factors are renormalized on input.
pub fn parse_vectors(text: &str) -> Result<ProductTuple> {
    let doc: VectorsDoc = serde_json::from_str(text).map_err(|_| {
        Error::StateFormat(
            "factors: expected a list of factors, or an object with a \"factors\" list, \
             each factor a list of [re, im] pairs"
                .into(),
        )
    })?;
    let factors = match doc {
        VectorsDoc::Bare(f) | VectorsDoc::Wrapped { factors: f } => f,
    };
    let factors = factors
        .into_iter()
        .enumerate()
        .map(|(r, f)| {
            UnitVector::new(f.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                .map_err(|e| Error::StateFormat(format!("factors[{r}]: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductTuple::new(factors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_round_trip() {
        let h = Hypermatrix::from_fn(vec![2, 3], |i| {
            Complex64::new(i[0] as f64, -(i[1] as f64) * 0.25)
        })
        .unwrap();
        assert_eq!(parse_state(&state_to_json(&h)).unwrap(), h);
    }

    #[test]
    fn state_errors_name_the_field() {
        let e = parse_state(r#"{"shape":[2,2],"coeffs":[[1,0]]}"#).unwrap_err();
        assert!(e.to_string().contains("coeffs"), "{e}");
        let e = parse_state(r#"{"coeffs":[[1,0]]}"#).unwrap_err();
        assert!(e.to_string().contains("shape"), "{e}");
        assert!(parse_state("not json").is_err());
        assert!(parse_state(r#"{"shape":[2,0],"coeffs":[]}"#).is_err());
    }

    #[test]
    fn vectors_in_both_layouts() {
        let bare = parse_vectors("[[[1,0],[0,0]],[[0,0],[2,0]]]").unwrap();
        let wrapped = parse_vectors(r#"{"factors":[[[1,0],[0,0]],[[0,0],[2,0]]]}"#).unwrap();
        assert_eq!(bare, wrapped);
        assert_eq!(bare.factor(1).components()[1], Complex64::new(1.0, 0.0));
        let e = parse_vectors("[[[0,0]]]").unwrap_err();
        assert!(e.to_string().contains("factors[0]"), "{e}");
    }

    #[test]
    fn product_tuples_serialize_as_pairs() {
        let p = ProductTuple::basis(&[2, 2], &[0, 1]).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, "[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]");
        assert_eq!(parse_vectors(&text).unwrap(), p);
    }
}
