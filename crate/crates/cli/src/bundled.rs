//! Example configurations shipped with the tool, each with a default command.

pub struct Bundled {
    pub name: &'static str,
    pub description: &'static str,
    pub toml: &'static str,
    /// Subcommand and flags run against the example; `--config` is added by the caller.
    pub command: &'static [&'static str],
    /// Expected JSON-lines output of `command`.
    pub expected: &'static str,
}

macro_rules! bundled {
    ($name:literal, $desc:literal, [$($arg:literal),*]) => {
        Bundled {
            name: $name,
            description: $desc,
            toml: include_str!(concat!("../bundled/", $name, ".toml")),
            command: &[$($arg),*],
            expected: include_str!(concat!("../bundled/expected/", $name, ".jsonl")),
        }
    };
}

pub const BUNDLED: &[Bundled] = &[
    bundled!("golden_mean", "no two adjacent 1s", ["entropy"]),
    bundled!("even", "runs of 0s between 1s have even length; not of finite type", ["check-step"]),
    bundled!("gg_mean", "generalised golden mean shift on the grid, three symbols", ["enumerate"]),
    bundled!("alt_00_11", "no 00 and no 11; not strongly irreducible", ["check-si"]),
    bundled!("f010_111", "no 010 and no 111; no bounded propagation", ["check-bp"]),
    bundled!("paper_map", "00 -> 1, 01 -> 0, 10 -> 0 from the golden mean shift to the even shift", ["goe"]),
    bundled!("dinf_symmetric_rule", "reflection-invariant parity rule on the infinite dihedral group", ["goe"]),
];

pub fn find(name: &str) -> Option<&'static Bundled> {
    BUNDLED.iter().find(|b| b.name == name)
}
