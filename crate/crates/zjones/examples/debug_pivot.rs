// temporary: validate braid-derived PDs against known Jones polynomials
use zjones::knot::bracket::{kauffman_bracket, normalized_bracket, PlanarDiagram};

fn main() {
    // right trefoil from closure of sigma_1^3
    let tr = PlanarDiagram::new(vec![[2, 1, 3, 4], [4, 3, 5, 6], [6, 5, 1, 2]], 3).unwrap();
    println!("sigma1^3 bracket: {:?}", kauffman_bracket(&tr).unwrap());
    println!("sigma1^3 f:       {:?}", normalized_bracket(&tr).unwrap());
    println!("  expect right trefoil V: -A^-16 + A^-12 + A^-4");

    // figure-eight from closure of (sigma_1 sigma_2^{-1})^2
    let f8 = PlanarDiagram::new(
        vec![[2, 1, 4, 5], [5, 6, 7, 3], [6, 4, 1, 8], [8, 2, 3, 7]],
        0,
    )
    .unwrap();
    println!("fig8 f: {:?}", normalized_bracket(&f8).unwrap());
    println!("  expect A^8 - A^4 + 1 - A^-4 + A^-8");
}
