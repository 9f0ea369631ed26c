//! Generator-level *-homomorphisms between the presentations, relation lists
//! for each presentation, and mechanical checks that relations map to zero.

mod ideals;
mod maps;
mod relations;
mod verify;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::staralg::{is_ghost, letter_edge, AlgElement, Algebra, AlgebraError, FreeExpr, Generator};

pub use ideals::{
    commutator_generators, commutator_generators_weighted, gamma, gamma_commutator_form, hsat_generators,
    i0_generators, ideal_generators, kernel_generators, corner_commutator_check, semigroup_words, IdealGenerator, IdealKind,
    IdealSource, CornerCommutatorReport,
};
pub use maps::{corner_image, phi0, phi1, phi_vw, rho_tau};
pub use relations::{relations, Relation, RelationKind, RelationSet};
pub use verify::{verify, RelationResult, VerifyReport};

#[derive(Debug, Error)]
pub enum HomError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("generator `{0}` has no image")]
    Unmapped(Generator),
    #[error("map `{0}` has no source algebra")]
    NoSource(String),
    #[error("relation kind `{kind}` needs a {needs} graph, got {got}")]
    KindMismatch {
        kind: &'static str,
        needs: &'static str,
        got: &'static str,
    },
    #[error("`{0}` violates the side condition of its generator")]
    SideCondition(Generator),
    #[error("the commutator kind needs a word-length bound")]
    MissingBound,
}

/// Images of the generators of a presentation in a target algebra.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    name: String,
    source: Option<Algebra>,
    target: Algebra,
    images: BTreeMap<Generator, AlgElement>,
}

impl GeneratorMap {
    pub fn new(name: impl Into<String>, source: Option<Algebra>, target: Algebra) -> Self {
        GeneratorMap {
            name: name.into(),
            source,
            target,
            images: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> Option<&Algebra> {
        self.source.as_ref()
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn images(&self) -> &BTreeMap<Generator, AlgElement> {
        &self.images
    }

    /// Sets one image, normalized. Replaces any previous image.
    pub fn set_image(&mut self, g: Generator, image: AlgElement) {
        let image = self.target.normal_form(&image);
        self.images.insert(g, image);
    }

    pub fn image(&self, g: &Generator) -> Result<&AlgElement, HomError> {
        self.images.get(g).ok_or_else(|| HomError::Unmapped(g.clone()))
    }

    /// Substitutes images into a free expression; the result is normalized.
    pub fn apply(&self, expr: &FreeExpr) -> Result<AlgElement, HomError> {
        expr.eval(&self.target, &mut |g: &Generator| self.image(g).cloned())
    }

    /// Maps an element of the source algebra letter by letter.
    pub fn apply_element(&self, a: &AlgElement) -> Result<AlgElement, HomError> {
        let src = self.source.as_ref().ok_or_else(|| HomError::NoSource(self.name.clone()))?;
        let d = src.graph().graph();
        let mut cache: HashMap<u32, AlgElement> = HashMap::new();
        let mut acc = self.target.zero();
        for (w, c) in a.terms() {
            let mut factors = Vec::with_capacity(w.len().max(1));
            if w.is_empty() {
                factors.push(self.image(&Generator::Vertex(d.vertex_name(w.base()).to_string()))?.clone());
            }
            for &l in w.letters() {
                if !cache.contains_key(&l) {
                    let e = self.image(&Generator::Edge(d.edge_name(letter_edge(l)).to_string()))?;
                    let img = if is_ghost(l) { self.target.star(e) } else { e.clone() };
                    cache.insert(l, img);
                }
                factors.push(cache[&l].clone());
            }
            let term = self.target.product(&factors)?;
            acc = self.target.add(&acc, &self.target.scale(&term, c))?;
        }
        Ok(self.target.normal_form(&acc))
    }

    /// Composite `other ∘ self`, defined on the generators of `self`.
    pub fn then(&self, other: &GeneratorMap) -> Result<GeneratorMap, HomError> {
        let mut out = GeneratorMap::new(
            format!("{}∘{}", other.name, self.name),
            self.source.clone(),
            other.target.clone(),
        );
        for (g, img) in &self.images {
            out.images.insert(g.clone(), other.apply_element(img)?);
        }
        Ok(out)
    }
}
