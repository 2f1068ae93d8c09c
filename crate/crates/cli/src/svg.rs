//! Single-body SVG plots.

use std::fmt::Write;

use num_traits::ToPrimitive;
use okx_core::{Body, Rational};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 48.0;

pub fn format_point(p: &[Rational]) -> String {
    let cs: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", cs.join(", "))
}

pub fn vertex_list(body: &Body) -> String {
    body.vertices()
        .iter()
        .map(|v| format_point(v))
        .collect::<Vec<_>>()
        .join(" ")
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Renders the body, the coordinate axes and the maximal sub-simplex. The
/// exact vertex list travels in a leading comment.
pub fn render(body: &Body, caption: &str) -> String {
    let lambda = body.max_subsimplex().lengths;
    let extent = |axis: usize| {
        let top = body
            .max_coordinate(axis)
            .map(|m| f(&m))
            .unwrap_or(0.0)
            .max(f(&lambda[axis]));
        if top > 0.0 {
            top
        } else {
            1.0
        }
    };
    let (xmax, ymax) = (extent(0), extent(1));
    let span = SIZE - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + x / xmax * span;
    let py = |y: f64| SIZE - MARGIN - y / ymax * span;
    let coords = |pts: &[Vec<Rational>]| {
        pts.iter()
            .map(|p| format!("{:.3},{:.3}", px(f(&p[0])), py(f(&p[1]))))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let exact = if body.is_empty() {
        "empty body".to_string()
    } else {
        vertex_list(body)
    };
    let _ = writeln!(out, "<!-- vertices: {} -->", exact.replace("--", "- -"));
    let _ = writeln!(out, "<title>{}</title>", escape(caption));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    let (ox, oy) = (px(0.0), py(0.0));
    let _ = writeln!(
        out,
        "<g stroke=\"black\" stroke-width=\"1\">\
<line x1=\"{ox:.3}\" y1=\"{oy:.3}\" x2=\"{:.3}\" y2=\"{oy:.3}\"/>\
<line x1=\"{ox:.3}\" y1=\"{oy:.3}\" x2=\"{ox:.3}\" y2=\"{:.3}\"/></g>",
        SIZE - MARGIN / 2.0,
        MARGIN / 2.0
    );
    let _ = writeln!(
        out,
        "<g font-family=\"sans-serif\" font-size=\"12\">\
<text x=\"{:.3}\" y=\"{:.3}\">x1</text><text x=\"{:.3}\" y=\"{:.3}\">x2</text>\
<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\">{xmax}</text>\
<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"end\">{ymax}</text></g>",
        SIZE - MARGIN / 2.0 + 4.0,
        oy + 4.0,
        ox - 6.0,
        MARGIN / 2.0 - 6.0,
        px(xmax),
        oy + 16.0,
        ox - 6.0,
        py(ymax) + 4.0,
    );

    let vs = body.vertices();
    let style = "fill=\"#9ecae1\" fill-opacity=\"0.7\" stroke=\"#08519c\" stroke-width=\"2\"";
    match vs.len() {
        0 => {}
        1 => {
            let _ = writeln!(
                out,
                "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"4\" {style}/>",
                px(f(&vs[0][0])),
                py(f(&vs[0][1]))
            );
        }
        2 => {
            let _ = writeln!(out, "<polyline points=\"{}\" {style}/>", coords(vs));
        }
        _ => {
            let _ = writeln!(
                out,
                "<polygon points=\"{}\" {style}/>",
                coords(&hull_order(vs))
            );
        }
    }

    let zero = Rational::from_integer(0.into());
    let simplex = vec![
        vec![zero.clone(), zero.clone()],
        vec![lambda[0].clone(), zero.clone()],
        vec![zero, lambda[1].clone()],
    ];
    let _ = writeln!(
        out,
        "<polygon points=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>",
        coords(&simplex)
    );
    out.push_str("</svg>\n");
    out
}

/// Vertices of a planar polygon in counterclockwise order around their centroid.
fn hull_order(vs: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = vs.len() as f64;
    let cx = vs.iter().map(|v| f(&v[0])).sum::<f64>() / n;
    let cy = vs.iter().map(|v| f(&v[1])).sum::<f64>() / n;
    let mut out = vs.to_vec();
    out.sort_by(|a, b| {
        let ta = (f(&a[1]) - cy).atan2(f(&a[0]) - cx);
        let tb = (f(&b[1]) - cy).atan2(f(&b[0]) - cx);
        ta.total_cmp(&tb)
    });
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
