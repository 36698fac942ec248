use approx_algebra::closure::{Closure, ClosureSpec};
use approx_algebra::ring::grammar::parse_ring;
use approx_algebra::ring::Subset;

fn member(ring: &str, closure: &str, x: &str, set: &[&str]) -> bool {
    let r = parse_ring(ring).unwrap();
    let cl = ClosureSpec::parse(&r, closure).unwrap();
    let elems: Vec<_> = set.iter().map(|s| r.parse_elem(s).unwrap()).collect();
    cl.member(&r.parse_elem(x).unwrap(), &Subset::from_elems(&r, &elems))
        .unwrap()
}

#[test]
fn gray_pixel() {
    let (r, c) = ("prod:[Z,Z,Z]", "setshift:J=(5,5,5)");
    assert!(member(r, c, "(130,135,125)", &["(130,130,130)"]));
    assert!(!member(r, c, "(131,135,125)", &["(130,130,130)"]));
}

#[test]
fn noisy_codeword() {
    let (r, c) = ("GF:2/x^8", "setshift:J=x");
    assert!(member(r, c, "x^4+x^3+x+1", &["x^4+x^3+1"]));
    assert!(!member(r, c, "x^4+x^3+x", &["x^4+x^3+1"]));
}
