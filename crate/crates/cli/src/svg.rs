//! Disk pictures: marked points on a circle, arcs drawn as circular arcs
//! orthogonal to the boundary.

use std::f64::consts::PI;
use std::fmt::Write as _;

use silt_core::{Color, Dissection, XPair};

const SIZE: f64 = 400.0;
const RADIUS: f64 = 160.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Glyph {
    Circ,
    Bullet,
    Cross,
}

impl Glyph {
    fn class(self) -> &'static str {
        match self {
            Glyph::Circ => "circ",
            Glyph::Bullet => "bullet",
            Glyph::Cross => "cross",
        }
    }
}

/// Boundary items placed counterclockwise at equal angles, plus chords
/// between item positions.
#[derive(Debug, Clone)]
pub struct Picture {
    items: Vec<(Glyph, String)>,
    chords: Vec<(usize, usize)>,
}

impl Picture {
    pub fn of_dissection(d: &Dissection) -> Self {
        let items = d
            .disk()
            .boundary()
            .into_iter()
            .map(|p| {
                let glyph = match p.color {
                    Color::Circ => Glyph::Circ,
                    Color::Bullet => Glyph::Bullet,
                };
                (glyph, p.to_string())
            })
            .collect();
        let chords = d
            .arcs()
            .iter()
            .map(|c| (c.point(0).item(), c.point(1).item()))
            .collect();
        Self { items, chords }
    }

    /// The fan model with `n + 1` clusters of `d` ×-points each, and the
    /// given slaloms.
    pub fn of_slaloms(n: usize, d: usize, slaloms: &[XPair]) -> Self {
        let mut items = Vec::new();
        for c in 0..=n {
            for i in (1 - d as i64)..=0 {
                items.push((Glyph::Cross, format!("({c},{i})")));
            }
            items.push((Glyph::Bullet, format!("b{c}")));
        }
        let position =
            |p: silt_core::XPoint| p.cluster * (d + 1) + (p.index + d as i64 - 1) as usize;
        let chords = slaloms
            .iter()
            .map(|s| (position(s.s), position(s.t)))
            .collect();
        Self { items, chords }
    }

    fn point(&self, item: usize) -> (f64, f64) {
        let angle = 2.0 * PI * item as f64 / self.items.len() as f64;
        // screen y grows downwards, so counterclockwise means subtracting
        (
            SIZE / 2.0 + RADIUS * angle.cos(),
            SIZE / 2.0 - RADIUS * angle.sin(),
        )
    }

    fn chord_path(&self, a: usize, b: usize) -> String {
        let n = self.items.len() as f64;
        let (x1, y1) = self.point(a);
        let (x2, y2) = self.point(b);
        let span = {
            let raw = 2.0 * PI * (a as f64 - b as f64).abs() / n;
            raw.min(2.0 * PI - raw)
        };
        if (PI - span).abs() < 1e-9 {
            return format!("M {x1:.3} {y1:.3} L {x2:.3} {y2:.3}");
        }
        // the orthogonal circle's centre lies on the bisector, outside the disk
        let (cx0, cy0) = (SIZE / 2.0, SIZE / 2.0);
        let (mx, my) = ((x1 + x2) / 2.0 - cx0, (y1 + y2) / 2.0 - cy0);
        let len = (mx * mx + my * my).sqrt();
        let dist = RADIUS / (span / 2.0).cos();
        let (cx, cy) = (cx0 + mx / len * dist, cy0 + my / len * dist);
        let r = RADIUS * (span / 2.0).tan();
        let (px, py) = (cx - mx / len * r, cy - my / len * r);
        let cross = (x1 - cx) * (py - cy) - (y1 - cy) * (px - cx);
        let sweep = u8::from(cross > 0.0);
        format!("M {x1:.3} {y1:.3} A {r:.3} {r:.3} 0 0 {sweep} {x2:.3} {y2:.3}")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let c = SIZE / 2.0;
        let _ = writeln!(
            out,
            r#"  <circle class="boundary" cx="{c:.3}" cy="{c:.3}" r="{RADIUS:.3}" fill="none" stroke="black"/>"#
        );
        for &(a, b) in &self.chords {
            let _ = writeln!(
                out,
                r#"  <path class="chord" d="{}" fill="none" stroke="steelblue"/>"#,
                self.chord_path(a, b)
            );
        }
        for (k, (glyph, label)) in self.items.iter().enumerate() {
            let (x, y) = self.point(k);
            let class = glyph.class();
            match glyph {
                Glyph::Circ => {
                    let _ = writeln!(
                        out,
                        r#"  <circle class="{class}" cx="{x:.3}" cy="{y:.3}" r="5" fill="white" stroke="black"/>"#
                    );
                }
                Glyph::Bullet => {
                    let _ = writeln!(
                        out,
                        r#"  <circle class="{class}" cx="{x:.3}" cy="{y:.3}" r="5" fill="black"/>"#
                    );
                }
                Glyph::Cross => {
                    let _ = writeln!(
                        out,
                        r#"  <path class="{class}" d="M {:.3} {:.3} L {:.3} {:.3} M {:.3} {:.3} L {:.3} {:.3}" stroke="black"/>"#,
                        x - 4.0,
                        y - 4.0,
                        x + 4.0,
                        y + 4.0,
                        x - 4.0,
                        y + 4.0,
                        x + 4.0,
                        y - 4.0
                    );
                }
            }
            let (lx, ly) = (c + (x - c) * 1.12, c + (y - c) * 1.12);
            let _ = writeln!(
                out,
                r#"  <text class="label" x="{lx:.3}" y="{ly:.3}" font-size="10" text-anchor="middle">{label}</text>"#
            );
        }
        out.push_str("</svg>\n");
        out
    }
}
