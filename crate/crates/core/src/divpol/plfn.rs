use std::collections::BTreeSet;

use num_traits::Zero;

use crate::exactgeom::{AffineFn, GeomError, Halfspace, Polytope, Rat, RatVec};

use super::DivpolError;

/// Concave piecewise affine function on a polytope, the minimum of finitely
/// many affine pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLConcave {
    domain: Polytope,
    pieces: Vec<AffineFn>,
}

impl PLConcave {
    pub fn new(domain: Polytope, pieces: Vec<AffineFn>) -> Result<Self, DivpolError> {
        if pieces.is_empty() {
            return Err(DivpolError::EmptyPieces);
        }
        let n = domain.ambient_dim();
        if let Some(p) = pieces.iter().find(|p| p.dim() != n) {
            return Err(DivpolError::Geom(GeomError::MixedDimensions {
                expected: n,
                found: p.dim(),
            }));
        }
        Ok(PLConcave { domain, pieces })
    }

    /// The constant function zero.
    pub fn zero(domain: Polytope) -> Self {
        let n = domain.ambient_dim();
        PLConcave {
            domain,
            pieces: vec![AffineFn::constant(n, Rat::zero())],
        }
    }

    pub fn domain(&self) -> &Polytope {
        &self.domain
    }

    pub fn pieces(&self) -> &[AffineFn] {
        &self.pieces
    }

    pub fn dim(&self) -> usize {
        self.domain.ambient_dim()
    }

    pub fn evaluate(&self, u: &RatVec) -> Result<Rat, DivpolError> {
        if !self.domain.contains(u) {
            return Err(DivpolError::OutsideDomain(u.clone()));
        }
        Ok(self.eval_unchecked(u))
    }

    /// Minimum over the pieces, without the domain check.
    pub fn eval_unchecked(&self, u: &RatVec) -> Rat {
        self.pieces
            .iter()
            .map(|p| p.eval(u))
            .min()
            .expect("at least one piece")
    }

    /// Region where piece `i` attains the minimum, if full dimensional.
    pub fn piece_cell(&self, i: usize) -> Option<Polytope> {
        let me = &self.pieces[i];
        let cuts: Vec<Halfspace> = self
            .pieces
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, other)| other.dominates(me))
            .collect();
        match self.domain.intersect(&cuts) {
            Ok(c) if c.is_full_dimensional() => Some(c),
            _ => None,
        }
    }

    /// Full dimensional linearity regions with their pieces.
    pub fn linearity_cells(&self) -> Vec<(Polytope, AffineFn)> {
        let c = self.canonicalize();
        (0..c.pieces.len())
            .filter_map(|i| c.piece_cell(i).map(|cell| (cell, c.pieces[i].clone())))
            .collect()
    }

    /// Drop inactive and duplicate pieces; sort the rest.
    pub fn canonicalize(&self) -> PLConcave {
        let uniq: Vec<AffineFn> = self
            .pieces
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let tmp = PLConcave {
            domain: self.domain.clone(),
            pieces: uniq,
        };
        if !tmp.domain.is_full_dimensional() || tmp.pieces.len() == 1 {
            return tmp;
        }
        let active: Vec<AffineFn> = (0..tmp.pieces.len())
            .filter(|&i| tmp.piece_cell(i).is_some())
            .map(|i| tmp.pieces[i].clone())
            .collect();
        PLConcave {
            domain: tmp.domain,
            pieces: active,
        }
    }

    /// True for the zero function (compared after canonicalisation).
    pub fn is_zero(&self) -> bool {
        let c = self.canonicalize();
        c.pieces.len() == 1 && c.pieces[0].linear.is_zero() && c.pieces[0].constant.is_zero()
    }

    /// Vertices of the linearity cells, sorted and deduplicated.
    pub fn cell_vertices(&self) -> Vec<RatVec> {
        let mut out = BTreeSet::new();
        for (cell, _) in self.linearity_cells() {
            out.extend(cell.vertices().iter().cloned());
        }
        out.into_iter().collect()
    }

    /// Pieces replaced by `f(piece)`, over a new domain.
    pub fn map_pieces(
        &self,
        domain: Polytope,
        f: impl Fn(&AffineFn) -> AffineFn,
    ) -> Result<PLConcave, DivpolError> {
        PLConcave::new(domain, self.pieces.iter().map(f).collect())
    }
}

/// Cell of a common refinement with the active piece of each function.
#[derive(Clone, Debug)]
pub struct RefinementCell {
    pub cell: Polytope,
    pub active: Vec<AffineFn>,
}

/// Common refinement of the linearity cells of several functions on the
/// same full dimensional domain.
pub fn common_refinement(domain: &Polytope, fns: &[&PLConcave]) -> Vec<RefinementCell> {
    let mut cells = vec![RefinementCell {
        cell: domain.clone(),
        active: Vec::new(),
    }];
    for f in fns {
        let fc = f.linearity_cells();
        let mut next = Vec::new();
        for c in &cells {
            for (g, piece) in &fc {
                if let Ok(x) = c.cell.intersect(g.facets()) {
                    if x.is_full_dimensional() {
                        let mut active = c.active.clone();
                        active.push(piece.clone());
                        next.push(RefinementCell { cell: x, active });
                    }
                }
            }
        }
        cells = next;
    }
    cells
}

/// All vertices of a common refinement.
pub fn refinement_vertices(cells: &[RefinementCell]) -> Vec<RatVec> {
    let mut out = BTreeSet::new();
    for c in cells {
        out.extend(c.cell.vertices().iter().cloned());
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{rint, RatVec};

    fn aff(v: &[i64], c: i64) -> AffineFn {
        AffineFn::new(RatVec::from_ints(v), rint(c))
    }

    #[test]
    fn canonical_drops_inactive() {
        let dom = Polytope::cuboid(&[-1], &[1]);
        let f = PLConcave::new(dom, vec![aff(&[1], 1), aff(&[-1], 1), aff(&[0], 5), aff(&[1], 1)]).unwrap();
        let c = f.canonicalize();
        assert_eq!(c.pieces(), &[aff(&[-1], 1), aff(&[1], 1)]);
        assert_eq!(f.evaluate(&RatVec::from_ints(&[0])).unwrap(), rint(1));
        assert!(f.evaluate(&RatVec::from_ints(&[2])).is_err());
        assert_eq!(c.cell_vertices(), vec![RatVec::from_ints(&[-1]), RatVec::from_ints(&[0]), RatVec::from_ints(&[1])]);
    }

    #[test]
    fn refinement_of_two() {
        let dom = Polytope::cuboid(&[-1, -1], &[1, 1]);
        let f = PLConcave::new(dom.clone(), vec![aff(&[1, 0], 0), aff(&[-1, 0], 0)]).unwrap();
        let g = PLConcave::new(dom.clone(), vec![aff(&[0, 1], 0), aff(&[0, -1], 0)]).unwrap();
        let cells = common_refinement(&dom, &[&f, &g]);
        assert_eq!(cells.len(), 4);
        assert_eq!(refinement_vertices(&cells).len(), 9);
        assert!(PLConcave::zero(dom).is_zero());
    }
}
