use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use hamcut::Scalar;
use svg::node::element::{Circle, Group, Line, Rectangle, Title};
use svg::Document;

use crate::format::{InstanceFile, Kind, SolutionFile};
use crate::Verdict;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Args)]
pub struct PlotArgs {
    /// Instance file.
    pub instance: PathBuf,
    /// Solution file.
    pub solution: PathBuf,
    /// SVG output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Which listed solution to draw.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
}

pub fn run(args: &PlotArgs) -> Result<Verdict> {
    let file = InstanceFile::read(&args.instance)?;
    let sol = SolutionFile::read(&args.solution)?;
    if file.dimension != 2 {
        bail!(
            "plotting requires dimension 2, instance has {}",
            file.dimension
        );
    }
    if sol.kind != file.kind || sol.dimension != 2 {
        bail!("solution does not belong to this instance");
    }
    let entry = sol
        .solutions
        .get(args.index)
        .with_context(|| format!("solution file lists no solution {}", args.index))?;
    let (dir, param) = entry.witness(file.kind)?;
    let dir = [dir[0].to_f64(), dir[1].to_f64()];
    let svg = render(&file, dir, param.to_f64());
    std::fs::write(&args.out, svg)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    Ok(Verdict::Ok)
}

type P = [f64; 2];

/// Atoms as `(family, f, y)` for hyperplanes or `(family, v, 0)` for points.
fn atoms(file: &InstanceFile) -> Vec<(usize, P, f64)> {
    let pair = |v: &[crate::format::Num]| [v[0].0.to_f64(), v[1].0.to_f64()];
    file.families
        .iter()
        .enumerate()
        .flat_map(|(j, fam)| {
            fam.elements.iter().map(move |el| match file.kind {
                Kind::Hyperplane => (
                    j,
                    pair(el.f.as_deref().expect("validated")),
                    el.y.as_ref().expect("validated").0.to_f64(),
                ),
                Kind::Points => (j, pair(el.v.as_deref().expect("validated")), 0.0),
            })
        })
        .collect()
}

/// Axis-aligned box `(min, max)` around the interesting points.
fn viewport(points: &[P]) -> (P, P) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points
        .iter()
        .filter(|p| p[0].is_finite() && p[1].is_finite())
    {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    for k in 0..2 {
        let span = (hi[k] - lo[k]).max(2.0);
        let mid = (hi[k] + lo[k]) / 2.0;
        lo[k] = mid - 0.65 * span;
        hi[k] = mid + 0.65 * span;
    }
    // square box so angles are not distorted
    let side = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let c = [(hi[0] + lo[0]) / 2.0, (hi[1] + lo[1]) / 2.0];
    (
        [c[0] - side / 2.0, c[1] - side / 2.0],
        [c[0] + side / 2.0, c[1] + side / 2.0],
    )
}

/// Parameter range of `p + s d` inside the box, if it meets it.
fn clip(p: P, d: P, (lo, hi): (P, P)) -> Option<(f64, f64)> {
    let (mut a, mut b) = (f64::NEG_INFINITY, f64::INFINITY);
    for k in 0..2 {
        if d[k].abs() < 1e-300 {
            if p[k] < lo[k] || p[k] > hi[k] {
                return None;
            }
        } else {
            let (s1, s2) = ((lo[k] - p[k]) / d[k], (hi[k] - p[k]) / d[k]);
            a = a.max(s1.min(s2));
            b = b.min(s1.max(s2));
        }
    }
    (a <= b).then_some((a, b))
}

fn round(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Segment from `p + a d` to `p + b d`, with the y axis pointing up.
fn segment(p: P, d: P, a: f64, b: f64) -> Line {
    Line::new()
        .set("x1", round(p[0] + a * d[0]))
        .set("y1", round(-(p[1] + a * d[1])))
        .set("x2", round(p[0] + b * d[0]))
        .set("y2", round(-(p[1] + b * d[1])))
}

/// The line `{q : f . q = y}` as a point and a unit direction.
fn line_of(f: P, y: f64) -> (P, P) {
    let n2 = f[0] * f[0] + f[1] * f[1];
    let n = n2.sqrt();
    ([y * f[0] / n2, y * f[1] / n2], [-f[1] / n, f[0] / n])
}

fn intersection(a: (P, f64), b: (P, f64)) -> Option<P> {
    let det = a.0[0] * b.0[1] - a.0[1] * b.0[0];
    (det.abs() > 1e-12).then(|| {
        [
            (a.1 * b.0[1] - b.1 * a.0[1]) / det,
            (a.0[0] * b.1 - b.0[0] * a.1) / det,
        ]
    })
}

pub fn render(file: &InstanceFile, dir: P, param: f64) -> String {
    let atoms = atoms(file);
    let mut points: Vec<P> = vec![[0.0, 0.0]];
    let (v, cut) = match file.kind {
        Kind::Hyperplane => {
            let v = [param * dir[0], param * dir[1]];
            points.push(v);
            for (i, a) in atoms.iter().enumerate() {
                points.push(line_of(a.1, a.2).0);
                for b in &atoms[i + 1..] {
                    points.extend(intersection((a.1, a.2), (b.1, b.2)));
                }
            }
            (Some(v), line_of([-dir[1], dir[0]], 0.0))
        }
        Kind::Points => {
            points.extend(atoms.iter().map(|a| a.1));
            (None, line_of(dir, param))
        }
    };
    let bbox = viewport(&points);
    let (lo, hi) = bbox;
    let side = hi[0] - lo[0];
    let stroke = round(side / 250.0);

    let mut doc = Document::new()
        .set(
            "viewBox",
            (round(lo[0]), round(-hi[1]), round(side), round(side)),
        )
        .set("width", 600)
        .set("height", 600)
        .add(
            Rectangle::new()
                .set("x", round(lo[0]))
                .set("y", round(-hi[1]))
                .set("width", round(side))
                .set("height", round(side))
                .set("fill", "white"),
        );

    let mut families = Group::new().set("stroke-width", stroke);
    for (j, p, y) in &atoms {
        let color = PALETTE[j % PALETTE.len()];
        let name = &file.families[*j].name;
        match file.kind {
            Kind::Hyperplane => {
                let (q, d) = line_of(*p, *y);
                if let Some((a, b)) = clip(q, d, bbox) {
                    families = families.add(
                        segment(q, d, a, b)
                            .set("class", "family")
                            .set("stroke", color)
                            .add(Title::new(name.as_str())),
                    );
                }
            }
            Kind::Points => {
                families = families.add(
                    Circle::new()
                        .set("class", "site")
                        .set("cx", round(p[0]))
                        .set("cy", round(-p[1]))
                        .set("r", round(3.0 * stroke))
                        .set("fill", color)
                        .add(Title::new(name.as_str())),
                );
            }
        }
    }
    doc = doc.add(families);

    let (q, d) = cut;
    if let Some((a, b)) = clip(q, d, bbox) {
        doc = doc.add(
            segment(q, d, a, b)
                .set("class", "solution")
                .set("stroke", "black")
                .set("stroke-width", stroke)
                .set(
                    "stroke-dasharray",
                    format!("{} {}", round(4.0 * stroke), round(2.0 * stroke)),
                ),
        );
    }
    if let Some(v) = v {
        let n = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
        let e = [dir[0] / n, dir[1] / n];
        if let Some((a, b)) = clip(v, e, bbox) {
            // rays of L starting at v, along e and against it
            for (class, color, from, to) in [
                ("ray ray-upper", "#444444", 0.0f64.max(a), b),
                ("ray ray-lower", "#999999", a, 0.0f64.min(b)),
            ] {
                if from < to {
                    doc = doc.add(
                        segment(v, e, from, to)
                            .set("class", class)
                            .set("stroke", color)
                            .set("stroke-width", round(2.0 * stroke)),
                    );
                }
            }
        }
        doc = doc.add(
            Circle::new()
                .set("class", "point")
                .set("cx", round(v[0]))
                .set("cy", round(-v[1]))
                .set("r", round(4.0 * stroke))
                .set("fill", "black"),
        );
    }
    doc.to_string() + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping() {
        let bbox = ([-1.0, -1.0], [1.0, 1.0]);
        assert_eq!(clip([0.0, 0.0], [1.0, 0.0], bbox), Some((-1.0, 1.0)));
        assert_eq!(clip([0.0, 2.0], [1.0, 0.0], bbox), None);
        let (p, d) = line_of([0.0, 2.0], 1.0);
        assert_eq!(p, [0.0, 0.5]);
        assert_eq!(d, [-1.0, 0.0]);
        assert_eq!(
            intersection(([1.0, 0.0], 1.0), ([0.0, 1.0], 2.0)),
            Some([1.0, 2.0])
        );
        assert_eq!(intersection(([1.0, 0.0], 1.0), ([2.0, 0.0], 2.0)), None);
    }

    #[test]
    fn viewport_is_square_and_padded() {
        let (lo, hi) = viewport(&[[0.0, 0.0], [4.0, 1.0]]);
        assert!(lo[0] < 0.0 && hi[0] > 4.0);
        assert!(((hi[0] - lo[0]) - (hi[1] - lo[1])).abs() < 1e-12);
    }
}
