use crate::error::{Error, Result};
use crate::models::CellComplexDescription;
use crate::qlinalg::Rational;

/// Two filtrations with a known upper bound on their interleaving distance
/// as filtered spaces.
#[derive(Clone, Debug)]
pub struct FiltrationPair {
    pub x: CellComplexDescription,
    pub y: CellComplexDescription,
    /// Both `X_t ⊆ Y_{t+δ}` and `Y_t ⊆ X_{t+δ}` hold for this `δ`.
    pub input_bound: Option<Rational>,
}

fn nonnegative(delta: &Rational) -> Result<()> {
    if delta < &Rational::from_integer(0.into()) {
        return Err(Error::validation("δ must be >= 0"));
    }
    Ok(())
}

/// `X` against the same cells entering `δ` later: `Y_t = X_{t−δ}`.
pub fn shift_pair(x: &CellComplexDescription, delta: &Rational) -> Result<FiltrationPair> {
    nonnegative(delta)?;
    x.validate()?;
    let mut y = x.clone();
    y.name = format!("{} shifted", x.name);
    for s in &mut y.stages {
        s.value += delta;
    }
    Ok(FiltrationPair { x: x.clone(), y, input_bound: Some(delta.clone()) })
}

/// `X` against the filtration whose stages from `stage` on enter `δ` later.
pub fn delay_pair(x: &CellComplexDescription, stage: usize, delta: &Rational) -> Result<FiltrationPair> {
    nonnegative(delta)?;
    x.validate()?;
    if stage >= x.stages.len() {
        return Err(Error::validation(format!("no stage {stage} to delay")));
    }
    let mut y = x.clone();
    y.name = format!("{} delayed from stage {stage}", x.name);
    for s in &mut y.stages[stage..] {
        s.value += delta;
    }
    Ok(FiltrationPair { x: x.clone(), y, input_bound: Some(delta.clone()) })
}

/// Unrelated inputs; no bound is known.
pub fn plain_pair(x: &CellComplexDescription, y: &CellComplexDescription) -> FiltrationPair {
    FiltrationPair { x: x.clone(), y: y.clone(), input_bound: None }
}
