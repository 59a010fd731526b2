use super::{parse_config, Config};
use crate::error::{Error, Result};

pub const BUILTIN_NAMES: &[&str] = &["roots2k", "solenoid", "rectangle", "primefamily"];

const ROOTS2K: &str = "\
# X = lim of the 2^n-th roots of unity, a Cantor set
ilattice re=0 base=0 step=2*pi
ext_zero = true
";

const SOLENOID: &str = "\
# X = the dyadic solenoid
vline re=0
ext_zero = true
tower constant=[2]
";

const RECTANGLE: &str = "\
rect re=[-1,0] im=[-1*pi,1*pi]
n_max = 40
";

const PRIMEFAMILY: &str = "\
# i*alpha_j, i*beta_j for the first eight odd primes, n_j = 2j
primefamily nseq=double J=8
n_max = 49
";

pub fn builtin(name: &str) -> Result<Config> {
    let text = match name {
        "roots2k" => ROOTS2K,
        "solenoid" => SOLENOID,
        "rectangle" => RECTANGLE,
        "primefamily" => PRIMEFAMILY,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "unknown example `{name}`; expected one of {}",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    parse_config(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_parse() {
        for name in BUILTIN_NAMES {
            assert!(builtin(name).unwrap().spectrum.is_some(), "{name}");
        }
        assert!(builtin("torus").is_err());
    }
}
