//! The named palettes used by the 4/81 verification pipeline, addressable
//! from the command line as `@P_LM`, `@P_3T`, `@P_4_81` and `@P_two_color`.

use crate::palette::Palette;

/// Registry names accepted by [`lookup`].
pub const NAMES: [&str; 4] = ["P_LM", "P_3T", "P_4_81", "P_two_color"];

/// Five colors, one of which (`ω`) is both a left and a middle color.
pub fn p_lm() -> Palette {
    Palette::from_named_triples(
        &["α", "β'", "γ", "γ'", "ω"],
        &[("α", "ω", "γ"), ("ω", "β'", "γ'")],
    )
    .expect("built-in palette is valid")
}

/// A chain of three triples linked left-to-right through `ω` and `ω'`.
pub fn p_3t() -> Palette {
    Palette::from_named_triples(
        &["α", "β", "β'", "β''", "γ''", "ω", "ω'"],
        &[("α", "β", "ω"), ("ω", "β'", "ω'"), ("ω'", "β''", "γ''")],
    )
    .expect("built-in palette is valid")
}

/// The four-color palette whose Lagrangian equals 4/81: a compact chain of
/// two triples sharing the middle color `β`.
pub fn p_4_81() -> Palette {
    Palette::from_named_triples(
        &["α", "β", "γ", "ω"],
        &[("α", "β", "γ"), ("α", "β", "ω"), ("ω", "β", "γ")],
    )
    .expect("built-in palette is valid")
}

/// The two-color palette whose product with its own inverse shows that
/// plain products do not capture joint colorability.
pub fn two_color() -> Palette {
    Palette::from_named_triples(&["α", "β"], &[("α", "β", "α"), ("α", "β", "β")])
        .expect("built-in palette is valid")
}

/// Resolves a registry name to its palette.
pub fn lookup(name: &str) -> Option<Palette> {
    match name {
        "P_LM" => Some(p_lm()),
        "P_3T" => Some(p_3t()),
        "P_4_81" => Some(p_4_81()),
        "P_two_color" => Some(two_color()),
        _ => None,
    }
}
