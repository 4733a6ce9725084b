//! JSON documents for automorphisms and generator images.

use serde::{Deserialize, Serialize};

use intdiff_core::aut::{CanonicalAutomorphism, GeneratorImages, InnerUnit, Permutation, TorusVector};
use intdiff_core::scalar::{format_scalar, parse_scalar};

use crate::parser::parse_operator;

#[derive(Debug, Serialize, Deserialize)]
pub struct AutDoc {
    pub n: usize,
    /// 1-based images of the slot permutation.
    pub perm: Vec<usize>,
    /// Torus entries as reduced fractions.
    pub lambda: Vec<String>,
    /// The inner unit and its inverse in canonical element text.
    pub phi: String,
    #[serde(rename = "phiInv")]
    pub phi_inv: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ImagesDoc {
    pub n: usize,
    /// Images of the derivations, in slot order.
    pub d: Vec<String>,
    /// Images of the integrations.
    pub i: Vec<String>,
    /// Images of the Euler operators.
    pub h: Vec<String>,
}

impl AutDoc {
    pub fn from_automorphism(aut: &CanonicalAutomorphism) -> Self {
        AutDoc {
            n: aut.n(),
            perm: aut.perm().one_based(),
            lambda: aut.torus().entries().iter().map(format_scalar).collect(),
            phi: aut.inner().phi().to_string(),
            phi_inv: aut.inner().phi_inv().to_string(),
        }
    }

    pub fn into_automorphism(&self) -> Result<CanonicalAutomorphism, String> {
        if self.n == 0 {
            return Err("n must be at least 1".into());
        }
        if self.perm.len() != self.n || self.lambda.len() != self.n {
            return Err(format!("perm and lambda must have length n = {}", self.n));
        }
        let perm = Permutation::from_one_based(&self.perm).map_err(|e| e.to_string())?;
        let lambda = self
            .lambda
            .iter()
            .map(|s| parse_scalar(s).ok_or_else(|| format!("bad torus entry {s:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        let torus = TorusVector::new(lambda).map_err(|e| e.to_string())?;
        let phi = parse_operator(&self.phi, self.n).map_err(|e| e.to_string())?;
        let phi_inv = parse_operator(&self.phi_inv, self.n).map_err(|e| e.to_string())?;
        let inner = InnerUnit::new(phi, phi_inv).map_err(|e| e.to_string())?;
        Ok(CanonicalAutomorphism::new(perm, torus, inner))
    }
}

impl ImagesDoc {
    pub fn into_images(&self) -> Result<GeneratorImages, String> {
        if self.n == 0 {
            return Err("n must be at least 1".into());
        }
        let parse_all = |texts: &[String]| -> Result<Vec<_>, String> {
            texts
                .iter()
                .map(|t| parse_operator(t, self.n).map_err(|e| e.to_string()))
                .collect()
        };
        GeneratorImages::new(parse_all(&self.d)?, parse_all(&self.i)?, parse_all(&self.h)?)
            .map_err(|e| e.to_string())
    }
}
