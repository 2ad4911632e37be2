//! SVG, TikZ and CSV renderings of a rhombic picture.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use rhombic_core::measure::PeriodicMeasure;
use rhombic_core::strings::ComponentClass;

use crate::report::{PictureOut, Rational};
use crate::RenderSpec;

const PAD: i64 = 40;
const UNIT_PX: i64 = 400;
const UNIT_CM: i64 = 8;

/// Exact rational rounded to 6 decimals, half away from zero.
pub fn fmt6(r: &BigRational) -> String {
    let million = BigInt::from(1_000_000u32);
    let n = (r * BigRational::from_integer(million.clone())).round().to_integer();
    let sign = if n.is_negative() { "-" } else { "" };
    let a = n.abs();
    format!("{sign}{}.{:06}", &a / &million, (&a % &million).to_string().parse::<u32>().unwrap_or(0))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn class_color(c: ComponentClass) -> &'static str {
    match c {
        ComponentClass::Preprojective => "#1f5fa8",
        ComponentClass::Preinjective => "#b3261e",
        ComponentClass::RegularLeftTube => "#2e7d32",
        ComponentClass::RegularRightTube => "#7b1fa2",
        ComponentClass::HomogeneousRegular => "#5d4037",
    }
}

const CLASSES: [ComponentClass; 5] = [
    ComponentClass::Preprojective,
    ComponentClass::Preinjective,
    ComponentClass::RegularLeftTube,
    ComponentClass::RegularRightTube,
    ComponentClass::HomogeneousRegular,
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Screen frame: unit size and rotation.
struct Frame {
    unit: BigRational,
    rotate: bool,
}

impl Frame {
    fn svg(spec: &RenderSpec) -> Self {
        Frame { unit: &spec.scale * int(UNIT_PX), rotate: spec.rotate }
    }

    fn size(&self) -> BigRational {
        let span = if self.rotate { int(2) } else { BigRational::one() };
        &self.unit * span + int(2 * PAD)
    }

    /// SVG pixel coordinates of the picture point `(x, y)`; y grows downward.
    fn px(&self, x: &BigRational, y: &BigRational) -> (String, String) {
        let pad = int(PAD);
        let (u, v) = if self.rotate {
            (BigRational::one() + x - y, int(2) - x - y)
        } else {
            (x.clone(), BigRational::one() - y)
        };
        (fmt6(&(&pad + &self.unit * u)), fmt6(&(&pad + &self.unit * v)))
    }
}

fn svg_label(p: &PeriodicMeasure) -> String {
    format!(
        "{}<tspan text-decoration=\"overline\">{}</tspan>",
        escape(&p.prefix().to_string()),
        escape(&p.period().to_string())
    )
}

pub fn svg(pic: &PictureOut, spec: &RenderSpec) -> String {
    let f = Frame::svg(spec);
    let size = fmt6(&f.size());
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&pic.quiver));
    s.push_str("<style>\n");
    s.push_str(".axis{stroke:#000;stroke-width:1}\n.label{font:10px sans-serif}\n");
    s.push_str(".limit-mu,.limit-mustar{fill:#000}\n.limit-point{fill:#fff;stroke:#000;stroke-width:1.5}\n");
    for c in CLASSES {
        let col = class_color(c);
        let _ = writeln!(s, ".module.{c}{{fill:{col}}}\n.approach.{c}{{stroke:{col};stroke-width:1}}");
    }
    s.push_str("</style>\n");

    let (ox, oy) = f.px(&zero, &zero);
    let (mx, my) = f.px(&one, &zero);
    let (sx, sy) = f.px(&zero, &one);
    s.push_str("<g class=\"axes\">\n");
    let _ = writeln!(s, "<line class=\"axis axis-mu\" x1=\"{ox}\" y1=\"{oy}\" x2=\"{mx}\" y2=\"{my}\"/>");
    let _ = writeln!(s, "<line class=\"axis axis-mustar\" x1=\"{ox}\" y1=\"{oy}\" x2=\"{sx}\" y2=\"{sy}\"/>");
    let _ = writeln!(s, "<text class=\"label\" x=\"{mx}\" y=\"{my}\">μ</text>");
    let _ = writeln!(s, "<text class=\"label\" x=\"{sx}\" y=\"{sy}\">μ*</text>");
    s.push_str("</g>\n");

    s.push_str("<g class=\"approaches\">\n");
    for fam in &pic.families {
        let Some(last) = pic.points.iter().rev().find(|p| p.family == fam.family) else {
            continue;
        };
        let (x1, y1) = f.px(&last.x.to_big(), &last.y.to_big());
        let (x2, y2) = f.px(&fam.x.to_big(), &fam.y.to_big());
        let _ = writeln!(
            s,
            "<line class=\"approach {}\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\"><title>{}</title></line>",
            fam.class,
            escape(&fam.family)
        );
    }
    s.push_str("</g>\n<g class=\"modules\">\n");
    for p in &pic.points {
        let (x, y) = f.px(&p.x.to_big(), &p.y.to_big());
        let _ = writeln!(
            s,
            "<circle class=\"module {}\" cx=\"{x}\" cy=\"{y}\" r=\"1.5\"><title>{}</title></circle>",
            p.class,
            escape(&p.module)
        );
    }
    s.push_str("</g>\n<g class=\"limits\">\n");
    for l in &pic.mu_limits {
        let (x, y) = f.px(&l.e.to_big(), &zero);
        let _ = writeln!(s, "<circle class=\"limit-mu\" cx=\"{x}\" cy=\"{y}\" r=\"3\"/>");
        let _ = writeln!(s, "<text class=\"label\" x=\"{x}\" y=\"{y}\" dy=\"14\">{}</text>", svg_label(&l.limit));
    }
    for l in &pic.mustar_limits {
        let (x, y) = f.px(&zero, &l.e.to_big());
        let _ = writeln!(s, "<circle class=\"limit-mustar\" cx=\"{x}\" cy=\"{y}\" r=\"3\"/>");
        let _ = writeln!(
            s,
            "<text class=\"label\" x=\"{x}\" y=\"{y}\" dy=\"14\" text-anchor=\"end\">{}</text>",
            svg_label(&l.limit)
        );
    }
    for l in &pic.limit_points {
        let (x, y) = f.px(&l.x.to_big(), &l.y.to_big());
        let mult = if l.families.len() > 1 { format!(" ×{}", l.families.len()) } else { String::new() };
        let _ = writeln!(
            s,
            "<circle class=\"limit-point\" cx=\"{x}\" cy=\"{y}\" r=\"3.5\"><title>{}{}</title></circle>",
            escape(&l.families.join(" ")),
            mult
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn tikz_label(p: &PeriodicMeasure) -> String {
    format!("${}\\overline{{{}}}$", p.prefix(), p.period())
}

fn tikz_xy(spec: &RenderSpec, x: &BigRational, y: &BigRational) -> String {
    let unit = &spec.scale * int(UNIT_CM);
    let (u, v) = if spec.rotate { (x - y, x + y) } else { (x.clone(), y.clone()) };
    format!("({},{})", fmt6(&(&unit * u)), fmt6(&(&unit * v)))
}

fn tikz_color(c: ComponentClass) -> &'static str {
    match c {
        ComponentClass::Preprojective => "blue",
        ComponentClass::Preinjective => "red",
        ComponentClass::RegularLeftTube => "green!50!black",
        ComponentClass::RegularRightTube => "violet",
        ComponentClass::HomogeneousRegular => "brown",
    }
}

pub fn tikz(pic: &PictureOut, spec: &RenderSpec) -> String {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let big = |r: &Rational| r.to_big();
    let mut s = String::new();
    let _ = writeln!(s, "% {}", pic.quiver);
    s.push_str("\\begin{tikzpicture}\n");
    let o = tikz_xy(spec, &zero, &zero);
    let _ = writeln!(s, "  \\draw[->] {o} -- {} node[right] {{$\\mu$}};", tikz_xy(spec, &one, &zero));
    let _ = writeln!(s, "  \\draw[->] {o} -- {} node[left] {{$\\mu^*$}};", tikz_xy(spec, &zero, &one));
    for fam in &pic.families {
        if let Some(last) = pic.points.iter().rev().find(|p| p.family == fam.family) {
            let _ = writeln!(
                s,
                "  \\draw[->, {}] {} -- {}; % {}",
                tikz_color(fam.class),
                tikz_xy(spec, &big(&last.x), &big(&last.y)),
                tikz_xy(spec, &big(&fam.x), &big(&fam.y)),
                fam.family
            );
        }
    }
    for p in &pic.points {
        let _ = writeln!(
            s,
            "  \\fill[{}] {} circle (0.6pt); % {}",
            tikz_color(p.class),
            tikz_xy(spec, &big(&p.x), &big(&p.y)),
            p.module
        );
    }
    for l in &pic.mu_limits {
        let _ = writeln!(
            s,
            "  \\fill {} circle (1.5pt) node[below right] {{{}}};",
            tikz_xy(spec, &big(&l.e), &zero),
            tikz_label(&l.limit)
        );
    }
    for l in &pic.mustar_limits {
        let _ = writeln!(
            s,
            "  \\fill {} circle (1.5pt) node[below left] {{{}}};",
            tikz_xy(spec, &zero, &big(&l.e)),
            tikz_label(&l.limit)
        );
    }
    for l in &pic.limit_points {
        let _ = writeln!(
            s,
            "  \\draw[fill=white] {} circle (1.8pt); % {}",
            tikz_xy(spec, &big(&l.x), &big(&l.y)),
            l.families.join(" ")
        );
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

pub fn csv(pic: &PictureOut) -> String {
    let mut s = String::from("record,name,class,dim,mu,mustar,x_num,x_den,y_num,y_den,approach\n");
    for p in &pic.points {
        let _ = writeln!(
            s,
            "module,{},{},{},{},{},{},{},{},{},",
            p.module, p.class, p.dim, p.mu, p.mustar, p.x.num, p.x.den, p.y.num, p.y.den
        );
    }
    for f in &pic.families {
        let approach = f.approach.map(|a| format!("{a:?}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "family,{},{},,{},{},{},{},{},{},{approach}",
            f.family, f.class, f.mu_limit, f.mustar_limit, f.x.num, f.x.den, f.y.num, f.y.den
        );
    }
    s
}
