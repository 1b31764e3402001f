//! Per-domain precomputation shared by the measure engines: the face
//! lattice with link masks, distance matrix, chunk-neighbour lists, and the
//! exact degree bases (column spans of the face-inclusion matrices plus
//! integer-scaled left-kernel vectors for fast span tests).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bitset::Mask;
use crate::domain::{self, Domain, ElemId};
use crate::numerics::matrix::{as_i64_vector, to_integer_vector};
use crate::numerics::rat::{rat_zero, Rat};
use crate::numerics::RatMatrix;

/// Faces are indexed in a fixed order: by size, then lexicographically.
pub struct Tables<M: Mask> {
    pub n_points: usize,
    pub dimension: usize,
    pub chunk: usize,
    /// face id -> sorted element ids
    pub faces: Vec<Vec<ElemId>>,
    /// face id -> mask of points containing the face
    pub links: Vec<M>,
    /// universe element -> mask of points containing it
    pub elem_links: Vec<M>,
    pub face_index: HashMap<Vec<ElemId>, usize>,
    /// faces grouped by size
    pub faces_by_size: Vec<Vec<usize>>,
    /// per point: the face ids of all subsets of the point
    pub point_subfaces: Vec<Vec<usize>>,
    /// pairwise distances |x \ y|
    pub dist: Vec<Vec<u16>>,
    /// per point: points at distance exactly `chunk`
    pub chunk_neighbors: Vec<Vec<usize>>,
    /// per degree d: independent columns (face ids) spanning the degree-<=d space
    pub span_basis: Vec<Vec<usize>>,
    /// per degree d: integer vectors w with w . v = 0 iff v lies in the
    /// degree-<=d span (left kernel of the inclusion matrix)
    pub complement_basis: Vec<Vec<Vec<BigInt>>>,
    /// i64 fast path for complement_basis when all entries fit
    pub complement_basis_i64: Vec<Option<Vec<Vec<i64>>>>,
    /// per degree d: dimension of the degree-<=d span
    pub span_dim: Vec<usize>,
}

impl<M: Mask> Tables<M> {
    pub fn build(d: &Domain) -> Self {
        Self::build_with_max_degree(d, d.dimension)
    }

    /// `max_degree` bounds the face sizes enumerated; measures that need
    /// faces up to the dimension require the default.
    pub fn build_with_max_degree(d: &Domain, max_degree: usize) -> Self {
        let n_points = d.len();
        let faces = domain::enumerate_faces(d, max_degree);
        let mut face_index = HashMap::with_capacity(faces.len());
        for (i, f) in faces.iter().enumerate() {
            face_index.insert(f.clone(), i);
        }
        let links: Vec<M> = faces
            .iter()
            .map(|f| {
                let mut m = M::zero(n_points);
                for pi in 0..n_points {
                    if f.iter().all(|&e| d.point_has(pi, e)) {
                        m.set(pi);
                    }
                }
                m
            })
            .collect();
        let elem_links: Vec<M> = (0..d.universe.size())
            .map(|e| {
                let mut m = M::zero(n_points);
                for pi in 0..n_points {
                    if d.point_has(pi, e as ElemId) {
                        m.set(pi);
                    }
                }
                m
            })
            .collect();
        let mut faces_by_size = vec![Vec::new(); max_degree + 1];
        for (i, f) in faces.iter().enumerate() {
            faces_by_size[f.len()].push(i);
        }
        let point_subfaces: Vec<Vec<usize>> = d
            .points
            .iter()
            .map(|p| {
                let mut out = Vec::new();
                subsets_of(&p.0, max_degree, &mut |s| {
                    out.push(*face_index.get(s).expect("face enumerated"));
                });
                // minimum-certificate search wants (size, lex) order
                out.sort_by(|&a, &b| {
                    faces[a].len().cmp(&faces[b].len()).then_with(|| faces[a].cmp(&faces[b]))
                });
                out
            })
            .collect();
        let dist: Vec<Vec<u16>> = (0..n_points)
            .map(|i| {
                (0..n_points)
                    .map(|j| domain::distance(&d.points[i], &d.points[j]) as u16)
                    .collect()
            })
            .collect();
        let chunk = if n_points >= 2 {
            (0..n_points)
                .flat_map(|i| (0..n_points).map(move |j| (i, j)))
                .filter(|(i, j)| i != j)
                .map(|(i, j)| dist[i][j] as usize)
                .min()
                .unwrap()
        } else {
            0
        };
        let chunk_neighbors: Vec<Vec<usize>> = (0..n_points)
            .map(|i| (0..n_points).filter(|&j| dist[i][j] as usize == chunk && j != i).collect())
            .collect();

        // Degree bases: inclusion matrix point x face, restricted per degree.
        let mut span_basis = Vec::new();
        let mut complement_basis = Vec::new();
        let mut complement_basis_i64 = Vec::new();
        let mut span_dim = Vec::new();
        for deg in 0..=max_degree {
            let face_ids: Vec<usize> =
                (0..faces.len()).filter(|&i| faces[i].len() <= deg).collect();
            let mut m = RatMatrix::zeros(n_points, face_ids.len());
            for (col, &fi) in face_ids.iter().enumerate() {
                for pi in links[fi].iter_ones(n_points) {
                    m[(pi, col)] = Rat::from_integer(1.into());
                }
            }
            let independent = m.independent_columns();
            span_dim.push(independent.len());
            span_basis.push(independent.iter().map(|&c| face_ids[c]).collect());
            let kernel = m.left_kernel();
            let ints: Vec<Vec<BigInt>> =
                kernel.iter().map(|w| to_integer_vector(w)).collect();
            let fast: Option<Vec<Vec<i64>>> =
                ints.iter().map(|w| as_i64_vector(w)).collect();
            complement_basis.push(ints);
            complement_basis_i64.push(fast);
        }

        Tables {
            n_points,
            dimension: d.dimension,
            chunk,
            faces,
            links,
            elem_links,
            face_index,
            faces_by_size,
            point_subfaces,
            dist,
            chunk_neighbors,
            span_basis,
            complement_basis,
            complement_basis_i64,
            span_dim,
        }
    }

    /// Smallest d such that the value vector lies in the degree-<=d span.
    /// Works for arbitrary rational vectors.
    pub fn degree_of_vector(&self, v: &[Rat]) -> usize {
        for d in 0..self.complement_basis.len() {
            if self.complement_basis[d].iter().all(|w| {
                let mut acc = rat_zero();
                for (wi, vi) in w.iter().zip(v) {
                    if !wi.is_zero() && !vi.is_zero() {
                        acc += Rat::from_integer(wi.clone()) * vi;
                    }
                }
                acc.is_zero()
            }) {
                return d;
            }
        }
        self.complement_basis.len() - 1
    }

    /// Degree of a Boolean function given as a point mask.
    pub fn degree_of_mask(&self, f: &M) -> usize {
        'deg: for d in 0..self.complement_basis.len() {
            if let Some(fast) = &self.complement_basis_i64[d] {
                for w in fast {
                    let mut acc: i64 = 0;
                    for pi in f.iter_ones(self.n_points) {
                        acc += w[pi];
                    }
                    if acc != 0 {
                        continue 'deg;
                    }
                }
                return d;
            }
            for w in &self.complement_basis[d] {
                let mut acc = BigInt::zero();
                for pi in f.iter_ones(self.n_points) {
                    acc += &w[pi];
                }
                if !acc.is_zero() {
                    continue 'deg;
                }
            }
            return d;
        }
        self.complement_basis.len() - 1
    }

    /// Mask of points where the function is one / zero.
    pub fn split_mask(&self, f: &M) -> (M, M) {
        let ones = f.clone();
        let zeros = M::full(self.n_points).minus(f);
        (ones, zeros)
    }
}

/// Visit every subset of `elems` of size <= max_size (including the empty
/// set) as a sorted slice.
fn subsets_of(elems: &[ElemId], max_size: usize, visit: &mut impl FnMut(&Vec<ElemId>)) {
    let mut cur: Vec<ElemId> = Vec::new();
    visit(&cur);
    fn rec(
        elems: &[ElemId],
        start: usize,
        max_size: usize,
        cur: &mut Vec<ElemId>,
        visit: &mut impl FnMut(&Vec<ElemId>),
    ) {
        if cur.len() == max_size {
            return;
        }
        for i in start..elems.len() {
            cur.push(elems[i]);
            visit(cur);
            rec(elems, i + 1, max_size, cur, visit);
            cur.pop();
        }
    }
    rec(elems, 0, max_size, &mut cur, visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, DomainSpec};

    #[test]
    fn cube3_face_counts_and_spans() {
        let d = build(&DomainSpec::Cube(3)).unwrap();
        let t: Tables<u64> = Tables::build(&d);
        // faces of the 3-cube: sum_k C(3,k) 2^k = 1 + 6 + 12 + 8 = 27
        assert_eq!(t.faces.len(), 27);
        // span dimensions 1, 4, 7, 8
        assert_eq!(t.span_dim, vec![1, 4, 7, 8]);
    }

    #[test]
    fn sym3_span_dims() {
        let d = build(&DomainSpec::SymmetricGroup(3)).unwrap();
        let t: Tables<u64> = Tables::build(&d);
        // degree <= d dimensions on S_3: 1, 5, 6, 6
        assert_eq!(t.span_dim, vec![1, 5, 6, 6]);
    }

    #[test]
    fn degree_of_simple_functions() {
        let d = build(&DomainSpec::Cube(3)).unwrap();
        let t: Tables<u64> = Tables::build(&d);
        // parity has full degree; a dictator has degree 1; constants 0
        let mut parity: u64 = 0;
        let mut dictator: u64 = 0;
        for (pi, p) in d.points.iter().enumerate() {
            let ones = p
                .0
                .iter()
                .filter(|&&e| d.universe.labels[e as usize].ends_with(",1)"))
                .count();
            if ones % 2 == 1 {
                parity |= 1 << pi;
            }
            if d.universe.labels[p.0[0] as usize] == "(1,1)" {
                dictator |= 1 << pi;
            }
        }
        assert_eq!(t.degree_of_mask(&parity), 3);
        assert_eq!(t.degree_of_mask(&dictator), 1);
        assert_eq!(t.degree_of_mask(&0u64), 0);
        assert_eq!(t.degree_of_mask(&0xffu64), 0);
    }
}
