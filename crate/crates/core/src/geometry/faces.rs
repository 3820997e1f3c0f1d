//! Face lattice of a polyhedral cone via extreme-ray incidence.
//!
//! A face is identified by the set of extreme rays it contains (every face
//! contains the lineality space). The family of such ray sets is generated
//! from the facet incidence sets by closure under intersection, so the walk
//! is linear in (faces × facets).

use std::collections::{BTreeSet, VecDeque};

use num::Zero;

use super::cone::Cone;
use crate::linalg::{dot, RVector};

/// A face together with the indices (into the parent's `rays()`) of the
/// extreme rays it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub ray_set: Vec<usize>,
    pub cone: Cone,
}

impl Face {
    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.ray_set.iter().all(|r| other.ray_set.binary_search(r).is_ok())
    }
}

/// All faces of `k`, sorted by dimension of the linear hull and then by the
/// incidence set lexicographically.
pub fn face_lattice(k: &Cone) -> Vec<Face> {
    let rays = k.rays();
    let facet_sets: Vec<BTreeSet<usize>> = k
        .inequalities()
        .iter()
        .map(|a| (0..rays.len()).filter(|&j| dot(a, &rays[j]).is_zero()).collect())
        .collect();

    let top: BTreeSet<usize> = (0..rays.len()).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: VecDeque<BTreeSet<usize>> = VecDeque::new();
    seen.insert(top.iter().copied().collect());
    queue.push_back(top);
    while let Some(f) = queue.pop_front() {
        for z in &facet_sets {
            let g: BTreeSet<usize> = f.intersection(z).copied().collect();
            let key: Vec<usize> = g.iter().copied().collect();
            if seen.insert(key) {
                queue.push_back(g);
            }
        }
    }

    let mut faces: Vec<Face> = seen
        .into_iter()
        .map(|ray_set| {
            let gens: Vec<RVector> = ray_set.iter().map(|&j| rays[j].clone()).collect();
            let cone = Cone::from_v(k.dim(), &gens, k.lineality());
            Face { ray_set, cone }
        })
        .collect();
    faces.sort_by(|a, b| {
        a.cone
            .linear_dim()
            .cmp(&b.cone.linear_dim())
            .then_with(|| a.ray_set.cmp(&b.ray_set))
    });
    faces
}

pub fn faces_of_cone(k: &Cone) -> Vec<Cone> {
    face_lattice(k).into_iter().map(|f| f.cone).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rvec;

    #[test]
    fn orthant_faces() {
        let faces = faces_of_cone(&Cone::orthant(2));
        let expected = vec![
            Cone::zero(2),
            Cone::from_v(2, &[rvec(&[0, 1])], &[]),
            Cone::from_v(2, &[rvec(&[1, 0])], &[]),
            Cone::orthant(2),
        ];
        assert_eq!(faces.len(), 4);
        for e in &expected {
            assert!(faces.contains(e), "missing face {e:?}");
        }
    }

    #[test]
    fn subspace_has_one_face() {
        let plane = Cone::from_h(3, &[rvec(&[1, 1, 1])], &[]);
        let faces = faces_of_cone(&plane);
        assert_eq!(faces, vec![plane]);
    }

    #[test]
    fn zero_line_halfline_product() {
        // {0} × R × R_+
        let k = Cone::from_h(3, &[rvec(&[1, 0, 0])], &[rvec(&[0, 0, -1])]);
        let faces = faces_of_cone(&k);
        assert_eq!(faces.len(), 2);
        assert!(faces.contains(&Cone::from_v(3, &[], &[rvec(&[0, 1, 0])])));
        assert!(faces.contains(&k));
    }
}
