//! Fifty-digit decimal constants, shipped as data.
//!
//! Each value is truncated to 50 significant digits and parsed with
//! precision 50, so its enclosure is one unit in the last place.

use crate::RealValue;

pub const PI_50: &str = "3.1415926535897932384626433832795028841971693993751~50";
pub const E_50: &str = "2.7182818284590452353602874713526624977572470937000~50";
pub const INV_E_50: &str = "0.36787944117144232159552377016146086744581113103177~50";
pub const SQRT2_50: &str = "1.4142135623730950488016887242096980785696718753769~50";
pub const SQRT7_50: &str = "2.6457513110645905905016157536392604257102591830825~50";

fn parse(text: &str) -> RealValue {
    RealValue::parse(text).expect("shipped constant parses")
}

pub fn pi() -> RealValue {
    parse(PI_50)
}

pub fn e() -> RealValue {
    parse(E_50)
}

pub fn inv_e() -> RealValue {
    parse(INV_E_50)
}

pub fn sqrt2() -> RealValue {
    parse(SQRT2_50)
}

pub fn sqrt7() -> RealValue {
    parse(SQRT7_50)
}

/// Looks up a shipped constant by name (`pi`, `e`, `inv_e`, `sqrt2`, `sqrt7`).
pub fn named(name: &str) -> Option<RealValue> {
    match name {
        "pi" => Some(pi()),
        "e" => Some(e()),
        "inv_e" | "1/e" => Some(inv_e()),
        "sqrt2" => Some(sqrt2()),
        "sqrt7" => Some(sqrt7()),
        _ => None,
    }
}
