use diracwb::{parse, parse_bytes, Structure};
use diracwb_core::{rat, Superfunction};
use proptest::prelude::*;

/// A polynomial as `(numerator, denominator, exponents)` terms, with its text.
fn poly_text(terms: &[(i64, i64, Vec<u32>)], base: &[&str]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (n, d, exps)) in terms.iter().enumerate() {
        if k > 0 {
            s.push_str(" + ");
        }
        s.push_str(&format!("({n}/{d})"));
        for (i, &e) in exps.iter().enumerate().take(base.len()) {
            if e > 0 {
                s.push_str(&format!("*{}^{e}", base[i]));
            }
        }
    }
    s
}

fn poly_value(terms: &[(i64, i64, Vec<u32>)], base_dim: usize) -> Superfunction {
    let mut acc = Superfunction::zero();
    for (n, d, exps) in terms {
        let mut t = Superfunction::constant(rat(*n, *d));
        for (i, &e) in exps.iter().enumerate().take(base_dim) {
            for _ in 0..e {
                t = &t * &Superfunction::x(i);
            }
        }
        acc += &t;
    }
    acc
}

fn terms() -> impl Strategy<Value = Vec<(i64, i64, Vec<u32>)>> {
    prop::collection::vec((-5i64..=5, 1i64..=4, prop::collection::vec(0u32..=2, 3)), 0..3)
}

const BASE: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Clone)]
struct Spec {
    n: usize,
    r: usize,
    forms: Vec<(usize, usize, Vec<(i64, i64, Vec<u32>)>)>,
    bivectors: Vec<(usize, usize, Vec<(i64, i64, Vec<u32>)>)>,
    endo: Vec<Vec<(i64, i64, Vec<u32>)>>,
    span_cols: usize,
}

fn spec() -> impl Strategy<Value = Spec> {
    (0usize..=3, 2usize..=3)
        .prop_flat_map(|(n, r)| {
            let pair = move || (0..r, 0..r, terms());
            (
                Just(n),
                Just(r),
                prop::collection::vec(pair(), 0..3),
                prop::collection::vec(pair(), 0..3),
                prop::collection::vec(terms(), r * r),
                1usize..=2,
            )
        })
        .prop_map(|(n, r, forms, bivectors, endo, span_cols)| Spec {
            n,
            r,
            forms,
            bivectors,
            endo,
            span_cols,
        })
}

fn text_of(s: &Spec) -> String {
    let base = &BASE[..s.n];
    let frames: Vec<String> = (1..=s.r).map(|a| format!("e{a}")).collect();
    let coframes: Vec<String> = (1..=s.r).map(|a| format!("f{a}")).collect();
    let mut t = format!("diracwb 1\nbase {}\nfiber {} dual {}\n", base.join(" "), frames.join(" "), coframes.join(" "));
    let sum = |pieces: &[(usize, usize, Vec<(i64, i64, Vec<u32>)>)], names: &[String]| {
        let parts: Vec<String> = pieces
            .iter()
            .map(|(a, b, p)| format!("({})*{}^{}", poly_text(p, base), names[*a], names[*b]))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" - ")
        }
    };
    t.push_str(&format!("twoform w = {}\n", sum(&s.forms, &coframes)));
    t.push_str(&format!("bivector b = {}\n", sum(&s.bivectors, &frames)));
    t.push_str("endo N\n");
    for row in s.endo.chunks(s.r) {
        let cells: Vec<String> = row.iter().map(|p| poly_text(p, base)).collect();
        t.push_str(&format!("  {}\n", cells.join(", ")));
    }
    t.push_str("end\nspan D\n");
    for a in 0..s.r {
        let cells: Vec<String> = (0..s.span_cols).map(|k| if a == k { "1".into() } else { "0".into() }).collect();
        t.push_str(&format!("  {}\n", cells.join(", ")));
    }
    t.push_str("end\nsubbundle L = graph b\ncheck poisson first=b\ncheck omegan first=w endo=N\n");
    t.push_str("check characteristic-pair first=b span=D\n");
    t
}

fn odd_sum(pieces: &[(usize, usize, Vec<(i64, i64, Vec<u32>)>)], n: usize, gen: fn(usize) -> Superfunction) -> Superfunction {
    let mut acc = Superfunction::zero();
    for (k, (a, b, p)) in pieces.iter().enumerate() {
        let t = &(&poly_value(p, n) * &gen(*a)) * &gen(*b);
        if k == 0 {
            acc += &t;
        } else {
            acc -= &t;
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_files_parse_to_their_values_and_round_trip(s in spec()) {
        let text = text_of(&s);
        let f = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        // `a^b` on odd generators is their product; compare against the kernel.
        let w = odd_sum(&s.forms, s.n, Superfunction::xi);
        let Some(Structure::TwoForm(parsed)) = f.lookup("w") else { panic!() };
        prop_assert_eq!(parsed, &w);
        let bv = odd_sum(&s.bivectors, s.n, Superfunction::theta);
        prop_assert_eq!(f.lookup("b"), Some(&Structure::Bivector(bv)));
        let n = f.endomorphism("N").unwrap();
        for (k, p) in s.endo.iter().enumerate() {
            let expected = poly_value(p, s.n).coefficient(&diracwb_core::Monomial::one());
            prop_assert_eq!(n.matrix.get(k / s.r, k % s.r), &expected);
        }
        let rendered = f.render();
        let g = parse(&rendered).map_err(|e| TestCaseError::fail(format!("{e}\n{rendered}")))?;
        prop_assert_eq!(&f, &g);
        prop_assert_eq!(g.render(), rendered);
    }

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,200}") {
        check_total(&text);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        if let Err(e) = parse_bytes(&bytes) {
            prop_assert!(e.line >= 1 && e.col >= 1);
        }
    }

    #[test]
    fn token_soup_never_panics(parts in prop::collection::vec(prop::sample::select(FRAGMENTS), 0..60)) {
        check_total(&parts.concat());
    }
}

const FRAGMENTS: &[&str] = &[
    "base x y", "base", "fiber e1 e2 dual f1 f2", "fiber tangent", "momenta P Q", "diracwb 1", "\n", "\n", "\n", " ",
    "twoform w = ", "bivector b = ", "mu = ", "gamma = ", "anchor e1 = ", "bracket e1 e2 = ", "endo N", "span D",
    "subbundle L", "subbundle L = graph b", "end", "check ", "dirac-pair", "poisson", "first=w", "second=b", "endo=N",
    "k=99", "x", "y", "e1", "e2", "f1", "f2", "p_x", "^", "*", "+", "-", "/", "0", "2", "33", "(", ")", ",", "=", "#",
    "∧", "1/0", "x^40",
];

fn check_total(text: &str) {
    if let Err(e) = parse(text) {
        let lines = text.lines().count();
        assert!(e.line >= 1 && e.line <= lines + 1, "{e} for {text:?}");
        assert!(e.col >= 1, "{e}");
        let len = text.lines().nth(e.line - 1).map_or(0, |l| l.chars().count());
        assert!(e.col <= len + 1, "{e} for {text:?}");
    }
}

#[test]
fn rejected_inputs_name_their_class() {
    use diracwb::ErrorKind::*;
    let cases = [
        ("", Syntax),
        ("base x\nfiber e dual f\nbivector b = e $ e\n", Lexical),
        ("base x\nfiber e dual f\nbivector b = (e\n", Syntax),
        ("base x\nfiber e dual f\nbivector b = g\n", UndeclaredIdentifier),
        ("base x\nfiber e dual f\nbivector b = f\n", BidegreeMismatch),
        ("base x\nfiber e dual f\ntwoform w = x ^ dq1\n", UndeclaredIdentifier),
    ];
    for (text, kind) in cases {
        assert_eq!(parse(text).unwrap_err().kind, kind, "{text:?}");
    }
}
