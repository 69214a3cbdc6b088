//! Complete search in the plane.
//!
//! Directions live on the projective line, represented by canonical vectors
//! with angle in `(-pi/2, pi/2]`. Between two consecutive event directions no
//! covector vanishes and no two incidence parameters swap order, so the
//! median intervals are formed by the same atoms and every comparison between
//! their endpoints keeps its sign. Feasibility is therefore constant on each
//! open arc, and evaluating every event direction plus one sample per arc
//! decides the whole circle.

use crate::error::{Error, Result};
use crate::geometry::Direction;
use crate::scalar::Scalar;

use super::{canonical_dir, ccw_before, certify, gap, Extent, Instance, Method, Mode, Solution};

/// All solutions of a 2-D hyperplane-mode instance: one per isolated feasible
/// direction and one representative per feasible arc, each certified exactly.
pub fn solve_exact_2d<T: Scalar>(instance: &Instance<T>) -> Result<Vec<Solution<T>>> {
    if !matches!(instance.mode(), Mode::Hyperplane(_)) {
        return Err(Error::WrongMode("classical"));
    }
    enumerate(instance)
}

/// Classical-mode counterpart of [`solve_exact_2d`]: the search runs over
/// covectors `f`, with events where two points get equal values `f(v)`.
pub fn solve_classical_exact_2d<T: Scalar>(instance: &Instance<T>) -> Result<Vec<Solution<T>>> {
    if !matches!(instance.mode(), Mode::Classical(_)) {
        return Err(Error::WrongMode("hyperplane"));
    }
    enumerate(instance)
}

/// Event directions in angular order: kernels of the event normals.
pub(crate) fn event_directions<T: Scalar>(instance: &Instance<T>) -> Vec<Direction<T>> {
    let mut dirs: Vec<Direction<T>> = Vec::new();
    for g in instance.event_normals() {
        if let Some(d) = canonical_dir(vec![-g[1].clone(), g[0].clone()]) {
            if !dirs.contains(&d) {
                dirs.push(d);
            }
        }
    }
    dirs.sort_by(|a, b| {
        if ccw_before(a, b) {
            std::cmp::Ordering::Less
        } else if ccw_before(b, a) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    dirs
}

/// One strictly interior direction per arc between consecutive events; the
/// last arc wraps through the antipode of the first event.
fn arc_samples<T: Scalar>(events: &[Direction<T>]) -> Vec<Direction<T>> {
    let add = |a: &[T], b: &[T]| -> Vec<T> {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.clone() + y.clone())
            .collect()
    };
    match events {
        [] => vec![],
        [only] => {
            let c = only.coords();
            vec![canonical_dir(vec![-c[1].clone(), c[0].clone()]).expect("nonzero")]
        }
        _ => {
            let mut samples: Vec<Direction<T>> = events
                .windows(2)
                .map(|w| canonical_dir(add(w[0].coords(), w[1].coords())).expect("distinct"))
                .collect();
            let last = events.last().expect("nonempty");
            let wrap = add(last.coords(), events[0].neg().coords());
            samples.push(canonical_dir(wrap).expect("distinct"));
            samples
        }
    }
}

pub(super) fn enumerate<T: Scalar>(instance: &Instance<T>) -> Result<Vec<Solution<T>>> {
    if !T::EXACT {
        return Err(Error::NotExactInput);
    }
    if instance.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: instance.dim(),
        });
    }
    let events = event_directions(instance);
    if events.is_empty() {
        // nothing distinguishes one direction from another
        let e = Direction::from_ints(&[1, 0])?;
        let zero = T::zero();
        return Ok(
            certify(instance, &e, &zero, &zero, Method::Exact2D, Extent::Circle)?
                .into_iter()
                .collect(),
        );
    }
    let samples = arc_samples(&events);

    // cyclic sequence: event 0, arc 0, event 1, arc 1, ...
    let ring: Vec<(&Direction<T>, bool)> = events
        .iter()
        .zip(&samples)
        .flat_map(|(c, s)| [(c, true), (s, false)])
        .collect();
    let feasible: Vec<bool> = ring
        .iter()
        .map(|(d, _)| gap(instance, d).map(|g| g.feasible()))
        .collect::<Result<_>>()?;

    let n = ring.len();
    let zero = T::zero();
    if feasible.iter().all(|&f| f) {
        let rep = ring[1].0;
        return Ok(
            certify(instance, rep, &zero, &zero, Method::Exact2D, Extent::Circle)?
                .into_iter()
                .collect(),
        );
    }

    let start = (0..n)
        .find(|&i| !feasible[i])
        .expect("some infeasible slot");
    let mut solutions = Vec::new();
    // slot `start` is infeasible, so no run wraps past it
    let mut i = 1;
    while i < n {
        if !feasible[(start + i) % n] {
            i += 1;
            continue;
        }
        let mut run = Vec::new();
        while i < n && feasible[(start + i) % n] {
            run.push((start + i) % n);
            i += 1;
        }

        let extent = if run.len() == 1 && ring[run[0]].1 {
            Extent::Isolated
        } else {
            let first = run[0];
            let last = *run.last().expect("nonempty run");
            // bounding events: the slot itself if it is an event, else its neighbour
            let (from, from_closed) = if ring[first].1 {
                (ring[first].0.clone(), true)
            } else {
                (ring[(first + n - 1) % n].0.clone(), false)
            };
            let (to, to_closed) = if ring[last].1 {
                (ring[last].0.clone(), true)
            } else {
                (ring[(last + 1) % n].0.clone(), false)
            };
            Extent::Arc {
                from,
                to,
                from_closed,
                to_closed,
            }
        };
        let rep = run.iter().copied().find(|&k| !ring[k].1).unwrap_or(run[0]);
        let solution = certify(instance, ring[rep].0, &zero, &zero, Method::Exact2D, extent)?;
        debug_assert!(
            solution.is_some(),
            "feasible direction failed exact verification"
        );
        solutions.extend(solution.map(|sol| (rep, sol)));
    }
    solutions.sort_by_key(|(rep, _)| *rep);
    Ok(solutions.into_iter().map(|(_, sol)| sol).collect())
}
