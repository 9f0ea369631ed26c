use rayon::prelude::*;
use serde::Serialize;

use super::{GeneratorMap, HomError, RelationSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationResult {
    pub family: String,
    pub label: String,
    pub zero: bool,
    /// Normal form of the image when it is nonzero.
    pub residue: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub map: String,
    pub kind: String,
    pub checked: usize,
    pub all_zero: bool,
    pub results: Vec<RelationResult>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &RelationResult> {
        self.results.iter().filter(|r| !r.zero)
    }
}

/// Maps every relation, normalizes, and records the nonzero residues.
/// Results keep the order of the relation list.
pub fn verify(map: &GeneratorMap, rels: &RelationSet) -> Result<VerifyReport, HomError> {
    let results = rels
        .relations
        .par_iter()
        .map(|r| {
            let image = map.apply(&r.expr)?;
            let zero = image.is_zero();
            Ok(RelationResult {
                family: r.family.to_string(),
                label: r.label.clone(),
                zero,
                residue: (!zero).then(|| map.target().format(&image)),
            })
        })
        .collect::<Result<Vec<_>, HomError>>()?;
    Ok(VerifyReport {
        map: map.name().to_string(),
        kind: rels.kind.name().to_string(),
        checked: results.len(),
        all_zero: results.iter().all(|r| r.zero),
        results,
    })
}
