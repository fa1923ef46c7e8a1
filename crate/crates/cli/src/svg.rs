//! Plain SVG pictures of one and two dimensional inputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use tfk_core::degen::DegenerationCandidate;
use tfk_core::divpol::{DivisorialPolytope, PLConcave, ProjPoint};
use tfk_core::exactgeom::{fmt_rat, Polytope, RatVec};

#[derive(Debug, thiserror::Error)]
pub enum SvgError {
    #[error("pictures are only drawn for dimension 1 or 2, not {0}")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const UNIT: f64 = 40.0;
const MARGIN: f64 = 30.0;

struct Frame {
    xmin: f64,
    ymax: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(pts: &[(f64, f64)]) -> Frame {
        let xmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min).min(0.0);
        let xmax = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max).max(0.0);
        let ymin = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).min(0.0);
        let ymax = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max).max(0.0);
        Frame {
            xmin,
            ymax,
            width: (xmax - xmin) * UNIT + 2.0 * MARGIN,
            height: (ymax - ymin) * UNIT + 2.0 * MARGIN,
        }
    }

    fn x(&self, x: f64) -> f64 {
        MARGIN + (x - self.xmin) * UNIT
    }

    fn y(&self, y: f64) -> f64 {
        MARGIN + (self.ymax - y) * UNIT
    }

    fn open(&self, title: &str) -> String {
        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.1}" height="{:.1}" viewBox="0 0 {:.1} {:.1}">"#,
            self.width,
            self.height + 20.0,
            self.width,
            self.height + 20.0
        )
        .unwrap();
        writeln!(s, r#"<title>{}</title>"#, escape(title)).unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" font-family="sans-serif">{}</text>"#,
            MARGIN,
            self.height + 14.0,
            escape(title)
        )
        .unwrap();
        // axes
        writeln!(
            s,
            r##"<line x1="0" y1="{y:.3}" x2="{w:.3}" y2="{y:.3}" stroke="#bbb" stroke-width="0.5"/>"##,
            y = self.y(0.0),
            w = self.width
        )
        .unwrap();
        writeln!(
            s,
            r##"<line x1="{x:.3}" y1="0" x2="{x:.3}" y2="{h:.3}" stroke="#bbb" stroke-width="0.5"/>"##,
            x = self.x(0.0),
            h = self.height
        )
        .unwrap();
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn xy(v: &RatVec) -> (f64, f64) {
    let f = v.to_f64();
    (f[0], f[1])
}

/// Vertices of a polygon in counterclockwise order.
fn polygon_order(p: &Polytope) -> Vec<RatVec> {
    let pts: Vec<(f64, f64)> = p.vertices().iter().map(xy).collect();
    let cx = pts.iter().map(|q| q.0).sum::<f64>() / pts.len() as f64;
    let cy = pts.iter().map(|q| q.1).sum::<f64>() / pts.len() as f64;
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        let ta = (pts[a].1 - cy).atan2(pts[a].0 - cx);
        let tb = (pts[b].1 - cy).atan2(pts[b].0 - cx);
        ta.total_cmp(&tb)
    });
    idx.into_iter().map(|i| p.vertices()[i].clone()).collect()
}

fn path(frame: &Frame, pts: &[(f64, f64)], close: bool) -> String {
    let mut d = String::new();
    for (i, (x, y)) in pts.iter().enumerate() {
        let _ = write!(d, "{}{:.3},{:.3} ", if i == 0 { "M" } else { "L" }, frame.x(*x), frame.y(*y));
    }
    if close {
        d.push('Z');
    }
    d.trim_end().to_string()
}

/// Graph of a function on an interval.
pub fn graph_1d(f: &PLConcave, title: &str) -> String {
    let mut verts = f.cell_vertices();
    verts.sort();
    let pts: Vec<(f64, f64)> = verts
        .iter()
        .map(|u| (u.to_f64()[0], RatVec(vec![f.eval_unchecked(u)]).to_f64()[0]))
        .collect();
    let frame = Frame::new(&pts);
    let mut s = frame.open(title);
    writeln!(
        s,
        r#"<path d="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        path(&frame, &pts, false)
    )
    .unwrap();
    for (u, (x, y)) in verts.iter().zip(&pts) {
        writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="2"/><text x="{:.3}" y="{:.3}" font-size="10" font-family="sans-serif">({}, {})</text>"#,
            frame.x(*x),
            frame.y(*y),
            frame.x(*x) + 3.0,
            frame.y(*y) - 4.0,
            fmt_rat(&u[0]),
            fmt_rat(&f.eval_unchecked(u))
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Linearity cells of a function on a polygon, labelled with vertex values.
pub fn cells_2d(f: &PLConcave, title: &str) -> String {
    let all: Vec<(f64, f64)> = f.domain().vertices().iter().map(xy).collect();
    let frame = Frame::new(&all);
    let mut s = frame.open(title);
    for (cell, _) in f.linearity_cells() {
        let pts: Vec<(f64, f64)> = polygon_order(&cell).iter().map(xy).collect();
        writeln!(
            s,
            r##"<path d="{}" fill="#eee" stroke="black" stroke-width="1"/>"##,
            path(&frame, &pts, true)
        )
        .unwrap();
    }
    for u in f.cell_vertices() {
        let (x, y) = xy(&u);
        writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="2"/><text x="{:.3}" y="{:.3}" font-size="10" font-family="sans-serif">{}</text>"#,
            frame.x(x),
            frame.y(y),
            frame.x(x) + 3.0,
            frame.y(y) - 4.0,
            fmt_rat(&f.eval_unchecked(&u))
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// A polygon with its vertices labelled.
pub fn polygon(p: &Polytope, title: &str) -> Result<String, SvgError> {
    if p.ambient_dim() != 2 {
        return Err(SvgError::UnsupportedDimension(p.ambient_dim()));
    }
    let verts = polygon_order(p);
    let pts: Vec<(f64, f64)> = verts.iter().map(xy).collect();
    let frame = Frame::new(&pts);
    let mut s = frame.open(title);
    writeln!(
        s,
        r##"<path d="{}" fill="#ddd" stroke="black" stroke-width="1.5"/>"##,
        path(&frame, &pts, true)
    )
    .unwrap();
    for (v, (x, y)) in verts.iter().zip(&pts) {
        writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="10" font-family="sans-serif">{}</text>"#,
            frame.x(*x) + 3.0,
            frame.y(*y) - 4.0,
            escape(&v.to_string())
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn file_stem(p: &ProjPoint) -> String {
    p.to_string().replace('/', "_").replace('-', "m")
}

/// Write one picture per function, and for `d = 1` one per candidate
/// polygon `Delta_Q`. Returns the written paths in order.
pub fn write_svgs(
    psi: &DivisorialPolytope,
    candidates: &[DegenerationCandidate],
    dir: &Path,
) -> Result<Vec<PathBuf>, SvgError> {
    let d = psi.dim();
    if d > 2 {
        return Err(SvgError::UnsupportedDimension(d));
    }
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for (p, f) in psi.entries() {
        let title = format!("Psi_{p}");
        let body = if d == 1 { graph_1d(f, &title) } else { cells_2d(f, &title) };
        let path = dir.join(format!("psi_{}.svg", file_stem(p)));
        std::fs::write(&path, body)?;
        out.push(path);
    }
    if d == 1 {
        for c in candidates {
            let body = polygon(&c.delta, &format!("Delta_{}", c.q))?;
            let path = dir.join(format!("delta_{}.svg", file_stem(&c.q)));
            std::fs::write(&path, body)?;
            out.push(path);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tfk_core::catalog;
    use tfk_core::degen::enumerate_candidates;
    use tfk_core::divpol::fano_check;

    #[test]
    fn del_pezzo_pictures() {
        let psi = catalog::dp4_3a1();
        let cands = enumerate_candidates(&fano_check(&psi).unwrap()).unwrap();
        let dir = std::env::temp_dir().join(format!("tfk-svg-{}", std::process::id()));
        let files = write_svgs(&psi, &cands, &dir).unwrap();
        assert_eq!(files.len(), 3 + 4);
        let diamond = std::fs::read_to_string(dir.join("delta_inf.svg")).unwrap();
        assert_eq!(diamond.matches("<text").count(), 1 + 4);
        let again = polygon(&cands.iter().find(|c| c.q == ProjPoint::Infinity).unwrap().delta, "Delta_inf").unwrap();
        assert_eq!(again, diamond);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn rejects_three_dimensions() {
        let psi = DivisorialPolytope::new(
            Polytope::cuboid(&[-1, -1, -1], &[1, 1, 1]),
            std::iter::empty::<(ProjPoint, Vec<tfk_core::exactgeom::AffineFn>)>(),
            None,
        )
        .unwrap();
        assert!(matches!(
            write_svgs(&psi, &[], Path::new("unused")),
            Err(SvgError::UnsupportedDimension(3))
        ));
    }
}
