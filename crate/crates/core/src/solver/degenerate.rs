use crate::error::{Error, Result};
use crate::geometry::Direction;
use crate::linalg::kernel_basis;
use crate::scalar::Scalar;

use super::{Instance, Mode};

/// Directions along which every family has parallel mass at least one half.
///
/// Each returned `e` solves the problem for every `x`. Candidates are spanned
/// by kernels of single atom covectors and of pairs of them; in the plane this
/// is exhaustive, above it samples each kernel by a basis.
pub fn detect_case_ii<T: Scalar>(instance: &Instance<T>) -> Result<Vec<Direction<T>>> {
    let Mode::Hyperplane(fams) = instance.mode() else {
        return Err(Error::WrongMode("classical"));
    };
    let dim = instance.dim();
    let mut covectors: Vec<Vec<T>> = Vec::new();
    for fam in fams {
        for (h, _) in fam.atoms() {
            if !covectors.iter().any(|c| c.as_slice() == h.covector()) {
                covectors.push(h.covector().to_vec());
            }
        }
    }

    let mut candidates: Vec<Direction<T>> = Vec::new();
    let mut consider = |v: Vec<T>| {
        if let Ok(d) = Direction::new(v) {
            let d = d.canonical();
            if !candidates.contains(&d) {
                candidates.push(d);
            }
        }
    };
    for (i, a) in covectors.iter().enumerate() {
        for v in kernel_basis(std::slice::from_ref(a), dim) {
            consider(v);
        }
        if dim > 2 {
            for b in &covectors[i + 1..] {
                for v in kernel_basis(&[a.clone(), b.clone()], dim) {
                    consider(v);
                }
            }
        }
    }

    let half = T::half();
    Ok(candidates
        .into_iter()
        .filter(|e| {
            fams.iter().all(|fam| {
                let mass = fam
                    .atoms()
                    .iter()
                    .filter(|(h, _)| h.is_parallel(e.coords()))
                    .fold(T::zero(), |acc, (_, w)| acc + w.clone());
                mass >= half.clone() - T::mass_slack(fam.atoms().len())
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::geometry::Hyperplane;
    use crate::measure::WeightedFamily;
    use crate::scalar::dot;
    use crate::scalar::int;
    use crate::solver::tests::basis_instance;

    type Q = BigRational;

    fn plane(f: &[i64], y: i64) -> Hyperplane<Q> {
        Hyperplane::new(f.iter().map(|&c| int(c)).collect(), int(y)).unwrap()
    }

    #[test]
    fn remark_instance_kernel() {
        let inst = Instance::hyperplane(vec![
            WeightedFamily::uniform("mu0", vec![plane(&[1, 0], 0)]).unwrap(),
            WeightedFamily::uniform("mu1", vec![plane(&[1, 0], 1)]).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            detect_case_ii(&inst).unwrap(),
            vec![Direction::from_ints(&[0, 1]).unwrap()]
        );
    }

    #[test]
    fn basis_instance_has_no_degenerate_direction() {
        assert!(detect_case_ii(&basis_instance(2)).unwrap().is_empty());
        assert!(detect_case_ii(&basis_instance(3)).unwrap().is_empty());
    }

    #[test]
    fn common_covector_in_three_dims() {
        let fams = (0..3)
            .map(|j| {
                WeightedFamily::uniform(
                    format!("F{j}"),
                    vec![plane(&[1, 2, 0], j), plane(&[1, 2, 0], j + 5)],
                )
                .unwrap()
            })
            .collect();
        let inst = Instance::hyperplane(fams).unwrap();
        let dirs = detect_case_ii(&inst).unwrap();
        assert_eq!(dirs.len(), 2);
        for e in &dirs {
            assert!(dot(&[int(1), int(2), int(0)], e.coords()) == int(0));
            for g in inst.intervals(e).unwrap() {
                assert!(g.is_whole_line());
            }
        }
    }

    #[test]
    fn float_kernels_count_as_parallel() {
        let h = |y: f64| Hyperplane::new(vec![0.3, 0.7, -0.2], y).unwrap();
        let inst = Instance::hyperplane(vec![
            WeightedFamily::uniform("a", vec![h(0.0)]).unwrap(),
            WeightedFamily::uniform("b", vec![h(1.0)]).unwrap(),
        ])
        .unwrap();
        assert_eq!(detect_case_ii(&inst).unwrap().len(), 2);
    }
}
