//! Commonness of a single equation a_1x_1 + … + a_kx_k = 0 with all a_i
//! nonzero: common iff k is odd or the coefficients split into pairs with
//! a_i + a_j = 0.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationClass {
    Common,
    Uncommon,
}

impl fmt::Display for EquationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquationClass::Common => "common",
            EquationClass::Uncommon => "uncommon",
        })
    }
}

/// A pairing of indices with a_i + a_j = 0, if one exists (even k).
pub fn zero_sum_pairing(field: &FieldSpec, coeffs: &[Elem]) -> Option<Vec<(usize, usize)>> {
    if coeffs.len() % 2 == 1 {
        return None;
    }
    let mut by_value: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, a) in coeffs.iter().enumerate() {
        by_value.entry(a.code()).or_default().push(i);
    }
    let mut pairs = Vec::new();
    let mut used = vec![false; coeffs.len()];
    for (i, &a) in coeffs.iter().enumerate() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = field.neg(a).code();
        let slot = by_value.get_mut(&partner)?;
        let j = loop {
            let j = slot.pop()?;
            if !used[j] {
                break j;
            }
        };
        used[j] = true;
        pairs.push((i, j));
    }
    Some(pairs)
}

pub fn classify_single_equation(field: &FieldSpec, coeffs: &[Elem]) -> Result<EquationClass> {
    if coeffs.is_empty() {
        return Err(Error::usage("an equation needs at least one coefficient"));
    }
    if coeffs.iter().any(|a| a.is_zero()) {
        return Err(Error::usage("all coefficients must be nonzero"));
    }
    if let Some(a) = coeffs.iter().find(|a| a.code() >= field.q()) {
        return Err(Error::domain(format!(
            "coefficient {} is not in F_{}",
            a.code(),
            field.q()
        )));
    }
    if coeffs.len() % 2 == 1 || zero_sum_pairing(field, coeffs).is_some() {
        Ok(EquationClass::Common)
    } else {
        Ok(EquationClass::Uncommon)
    }
}
