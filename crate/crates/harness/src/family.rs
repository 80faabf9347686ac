//! Finite schedules standing in for sequences of groups.

use std::fmt;

use msg_core::gf::prime_power;

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Alternating,
    Psl,
}

/// Characteristic declared for the tail of a schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Characteristic {
    Prime(u64),
    Infinite,
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Characteristic::Prime(p) => write!(f, "{p}"),
            Characteristic::Infinite => f.write_str("inf"),
        }
    }
}

impl Characteristic {
    pub fn parse(text: &str) -> Result<Characteristic> {
        match text.trim() {
            "inf" | "infinity" | "∞" => Ok(Characteristic::Infinite),
            t => t
                .parse()
                .map(Characteristic::Prime)
                .map_err(|_| HarnessError::Family(format!("bad characteristic `{t}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDescriptor {
    kind: FamilyKind,
    sizes: Vec<usize>,
    fields: Vec<u64>,
    characteristic: Characteristic,
}

impl FamilyDescriptor {
    pub fn alternating(sizes: Vec<usize>) -> Result<FamilyDescriptor> {
        check_increasing(&sizes)?;
        if sizes.first().is_some_and(|&n| n < 5) {
            return Err(HarnessError::Family(
                "alternating sizes must be >= 5".into(),
            ));
        }
        Ok(FamilyDescriptor {
            kind: FamilyKind::Alternating,
            sizes,
            fields: Vec::new(),
            characteristic: Characteristic::Infinite,
        })
    }

    /// The declared characteristic must be the characteristic of the last
    /// field, or `Infinite` when the characteristics strictly increase.
    pub fn psl(
        sizes: Vec<usize>,
        fields: Vec<u64>,
        characteristic: Characteristic,
    ) -> Result<FamilyDescriptor> {
        check_increasing(&sizes)?;
        if sizes.first().is_some_and(|&n| n < 2) {
            return Err(HarnessError::Family("PSL sizes must be >= 2".into()));
        }
        if fields.is_empty() {
            return Err(HarnessError::Family(
                "PSL family needs a field schedule".into(),
            ));
        }
        let chars = fields
            .iter()
            .map(|&q| {
                prime_power(q)
                    .map(|(p, _)| p)
                    .ok_or_else(|| HarnessError::Family(format!("{q} is not a prime power")))
            })
            .collect::<Result<Vec<u64>>>()?;
        let ok = match characteristic {
            Characteristic::Prime(p) => chars.last() == Some(&p),
            Characteristic::Infinite => chars.windows(2).all(|w| w[0] < w[1]),
        };
        if !ok {
            return Err(HarnessError::Family(format!(
                "declared characteristic {characteristic} does not match the field schedule"
            )));
        }
        Ok(FamilyDescriptor {
            kind: FamilyKind::Psl,
            sizes,
            fields,
            characteristic,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn fields(&self) -> &[u64] {
        &self.fields
    }

    pub fn characteristic(&self) -> Characteristic {
        self.characteristic
    }

    /// Schedule points `(n, q)`; every size is paired with every field.
    pub fn points(&self) -> Vec<(usize, Option<u64>)> {
        match self.kind {
            FamilyKind::Alternating => self.sizes.iter().map(|&n| (n, None)).collect(),
            FamilyKind::Psl => self
                .sizes
                .iter()
                .flat_map(|&n| self.fields.iter().map(move |&q| (n, Some(q))))
                .collect(),
        }
    }
}

fn check_increasing(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return Err(HarnessError::Family("empty size schedule".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::Family(
            "size schedule must be strictly increasing".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_schedules() {
        assert!(FamilyDescriptor::alternating(vec![5, 10, 20]).is_ok());
        assert!(FamilyDescriptor::alternating(vec![10, 10]).is_err());
        assert!(FamilyDescriptor::alternating(vec![]).is_err());
        let p3 = Characteristic::Prime(3);
        assert!(FamilyDescriptor::psl(vec![2, 3], vec![3, 9, 27], p3).is_ok());
        assert!(FamilyDescriptor::psl(vec![2], vec![4, 9], Characteristic::Prime(2)).is_err());
        assert!(FamilyDescriptor::psl(vec![2], vec![4, 9, 25], Characteristic::Infinite).is_ok());
        assert!(FamilyDescriptor::psl(vec![2], vec![9, 4], Characteristic::Infinite).is_err());
        assert!(FamilyDescriptor::psl(vec![2], vec![6], p3).is_err());
    }

    #[test]
    fn psl_points_pair_sizes_with_fields() {
        let fam = FamilyDescriptor::psl(vec![2, 3], vec![3, 9], Characteristic::Prime(3)).unwrap();
        assert_eq!(
            fam.points(),
            vec![(2, Some(3)), (2, Some(9)), (3, Some(3)), (3, Some(9))]
        );
    }
}
