//! Event alphabets, the seven structure families, validation and DCES
//! subclass classification.

mod event;
mod parse;
mod relations;
mod validate;

use std::fmt;
use std::str::FromStr;

pub(crate) use event::{is_token, map_set};
pub use event::{Alphabet, Event, EventId, EventSet, Iter, Subsets, MAX_EVENTS};
pub use parse::{parse_structure, parse_structure_unchecked, serialize};
pub use relations::{Bundles, Causes, Conflict, Disabling, Enablings, Modifiers};
pub use validate::{classify_dces, validate, SubclassFlags, ValidationReport, Violation};

use crate::error::{Error, Result};

/// The structure families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Ses,
    Ges,
    Dces,
    Des,
    Bes,
    Ebes,
    Rces,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Ses,
        Family::Ges,
        Family::Dces,
        Family::Des,
        Family::Bes,
        Family::Ebes,
        Family::Rces,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Ses => "SES",
            Family::Ges => "GES",
            Family::Dces => "DCES",
            Family::Des => "DES",
            Family::Bes => "BES",
            Family::Ebes => "EBES",
            Family::Rces => "RCES",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Usage(format!("unknown structure family `{s}`")))
    }
}

/// Shrinking-causality event structure: conflict, initial causes, droppers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ses {
    pub name: String,
    pub events: Alphabet,
    pub conflict: Conflict,
    pub causes: Causes,
    pub drops: Modifiers,
}

/// Growing-causality event structure: conflict, initial causes, adders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ges {
    pub name: String,
    pub events: Alphabet,
    pub conflict: Conflict,
    pub causes: Causes,
    pub adds: Modifiers,
}

/// Dynamic-causality event structure: both droppers and adders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dces {
    pub name: String,
    pub events: Alphabet,
    pub conflict: Conflict,
    pub causes: Causes,
    pub drops: Modifiers,
    pub adds: Modifiers,
}

/// Dual event structure: conflict and bundles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Des {
    pub name: String,
    pub events: Alphabet,
    pub conflict: Conflict,
    pub bundles: Bundles,
}

/// Bundle event structure: a DES whose bundle members pairwise conflict.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bes {
    pub name: String,
    pub events: Alphabet,
    pub conflict: Conflict,
    pub bundles: Bundles,
}

/// Extended bundle event structure: asymmetric disabling and bundles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ebes {
    pub name: String,
    pub events: Alphabet,
    pub disabling: Disabling,
    pub bundles: Bundles,
}

/// Event structure for resolvable conflict: set-to-set enablings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rces {
    pub name: String,
    pub events: Alphabet,
    pub enablings: Enablings,
}

impl Ses {
    pub fn new(name: impl Into<String>, events: Alphabet) -> Self {
        let n = events.len();
        Ses {
            name: name.into(),
            events,
            conflict: Conflict::new(n),
            causes: Causes::new(n),
            drops: Modifiers::new(n),
        }
    }
}

impl Ges {
    pub fn new(name: impl Into<String>, events: Alphabet) -> Self {
        let n = events.len();
        Ges {
            name: name.into(),
            events,
            conflict: Conflict::new(n),
            causes: Causes::new(n),
            adds: Modifiers::new(n),
        }
    }
}

impl Dces {
    pub fn new(name: impl Into<String>, events: Alphabet) -> Self {
        let n = events.len();
        Dces {
            name: name.into(),
            events,
            conflict: Conflict::new(n),
            causes: Causes::new(n),
            drops: Modifiers::new(n),
            adds: Modifiers::new(n),
        }
    }
}

impl Des {
    pub fn new(name: impl Into<String>, events: Alphabet) -> Self {
        let n = events.len();
        Des {
            name: name.into(),
            events,
            conflict: Conflict::new(n),
            bundles: Bundles::new(n),
        }
    }
}

impl Bes {
    pub fn new(name: impl Into<String>, events: Alphabet) -> Self {
        let n = events.len();
        Bes {
            name: name.into(),
            events,
            conflict: Conflict::new(n),
            bundles: Bundles::new(n),
        }
    }
}

impl Ebes {
    pub fn new(name: impl Into<String>, events: Alphabet) -> Self {
        let n = events.len();
        Ebes {
            name: name.into(),
            events,
            disabling: Disabling::new(n),
            bundles: Bundles::new(n),
        }
    }
}

impl Rces {
    pub fn new(name: impl Into<String>, events: Alphabet) -> Self {
        Rces {
            name: name.into(),
            events,
            enablings: Enablings::new(),
        }
    }
}

// Name-based builders, for hand-written structures in code and tests.

macro_rules! conflict_builder {
    ($($t:ty),*) => {$(
        impl $t {
            pub fn conflict(&mut self, a: &str, b: &str) -> Result<&mut Self> {
                let (a, b) = (self.events.lookup(a)?, self.events.lookup(b)?);
                self.conflict.insert(a, b);
                Ok(self)
            }
        }
    )*};
}
conflict_builder!(Ses, Ges, Dces, Des, Bes);

macro_rules! cause_builder {
    ($($t:ty),*) => {$(
        impl $t {
            pub fn cause(&mut self, cause: &str, target: &str) -> Result<&mut Self> {
                let (c, t) = (self.events.lookup(cause)?, self.events.lookup(target)?);
                self.causes.insert(c, t);
                Ok(self)
            }
        }
    )*};
}
cause_builder!(Ses, Ges, Dces);

macro_rules! modifier_builder {
    ($method:ident, $field:ident, $($t:ty),*) => {$(
        impl $t {
            /// Adds the triple `(cause, modifier, target)`.
            pub fn $method(&mut self, cause: &str, modifier: &str, target: &str) -> Result<&mut Self> {
                let c = self.events.lookup(cause)?;
                let m = self.events.lookup(modifier)?;
                let t = self.events.lookup(target)?;
                self.$field.insert(c, m, t);
                Ok(self)
            }
        }
    )*};
}
modifier_builder!(drop, drops, Ses, Dces);
modifier_builder!(add, adds, Ges, Dces);

macro_rules! bundle_builder {
    ($($t:ty),*) => {$(
        impl $t {
            pub fn bundle(&mut self, members: &[&str], target: &str) -> Result<&mut Self> {
                let m = self.events.set(members.iter().copied())?;
                let t = self.events.lookup(target)?;
                self.bundles.insert(m, t);
                Ok(self)
            }
        }
    )*};
}
bundle_builder!(Des, Bes, Ebes);

impl Ebes {
    /// Adds `x ⇝ y`.
    pub fn disable(&mut self, x: &str, y: &str) -> Result<&mut Self> {
        let (x, y) = (self.events.lookup(x)?, self.events.lookup(y)?);
        self.disabling.insert(x, y);
        Ok(self)
    }
}

impl Rces {
    pub fn enable(&mut self, from: &[&str], to: &[&str]) -> Result<&mut Self> {
        let w = self.events.set(from.iter().copied())?;
        let z = self.events.set(to.iter().copied())?;
        self.enablings.insert(w, z);
        Ok(self)
    }
}

/// A structure of any family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    Ses(Ses),
    Ges(Ges),
    Dces(Dces),
    Des(Des),
    Bes(Bes),
    Ebes(Ebes),
    Rces(Rces),
}

impl Structure {
    /// An empty structure of the given family.
    pub fn empty(family: Family, name: impl Into<String>, events: Alphabet) -> Self {
        match family {
            Family::Ses => Structure::Ses(Ses::new(name, events)),
            Family::Ges => Structure::Ges(Ges::new(name, events)),
            Family::Dces => Structure::Dces(Dces::new(name, events)),
            Family::Des => Structure::Des(Des::new(name, events)),
            Family::Bes => Structure::Bes(Bes::new(name, events)),
            Family::Ebes => Structure::Ebes(Ebes::new(name, events)),
            Family::Rces => Structure::Rces(Rces::new(name, events)),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Structure::Ses(_) => Family::Ses,
            Structure::Ges(_) => Family::Ges,
            Structure::Dces(_) => Family::Dces,
            Structure::Des(_) => Family::Des,
            Structure::Bes(_) => Family::Bes,
            Structure::Ebes(_) => Family::Ebes,
            Structure::Rces(_) => Family::Rces,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Structure::Ses(s) => &s.name,
            Structure::Ges(s) => &s.name,
            Structure::Dces(s) => &s.name,
            Structure::Des(s) => &s.name,
            Structure::Bes(s) => &s.name,
            Structure::Ebes(s) => &s.name,
            Structure::Rces(s) => &s.name,
        }
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        let name = name.into();
        match self {
            Structure::Ses(s) => s.name = name,
            Structure::Ges(s) => s.name = name,
            Structure::Dces(s) => s.name = name,
            Structure::Des(s) => s.name = name,
            Structure::Bes(s) => s.name = name,
            Structure::Ebes(s) => s.name = name,
            Structure::Rces(s) => s.name = name,
        }
    }

    pub fn events(&self) -> &Alphabet {
        match self {
            Structure::Ses(s) => &s.events,
            Structure::Ges(s) => &s.events,
            Structure::Dces(s) => &s.events,
            Structure::Des(s) => &s.events,
            Structure::Bes(s) => &s.events,
            Structure::Ebes(s) => &s.events,
            Structure::Rces(s) => &s.events,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    pub fn as_ses(&self) -> Option<&Ses> {
        match self {
            Structure::Ses(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_ges(&self) -> Option<&Ges> {
        match self {
            Structure::Ges(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_dces(&self) -> Option<&Dces> {
        match self {
            Structure::Dces(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_des(&self) -> Option<&Des> {
        match self {
            Structure::Des(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_ebes(&self) -> Option<&Ebes> {
        match self {
            Structure::Ebes(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_rces(&self) -> Option<&Rces> {
        match self {
            Structure::Rces(s) => Some(s),
            _ => None,
        }
    }
}

macro_rules! from_family {
    ($($v:ident),*) => {$(
        impl From<$v> for Structure {
            fn from(s: $v) -> Self {
                Structure::$v(s)
            }
        }
    )*};
}
from_family!(Ses, Ges, Dces, Des, Bes, Ebes, Rces);

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}
