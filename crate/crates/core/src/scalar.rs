use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Num, NumAssignOps, ToPrimitive};

/// Scalar type usable as a travel distance.
///
/// Integer distances (`i64`, `u32`, ...) give exact scoring; float distances
/// are accepted for real-valued benchmark matrices.
pub trait Distance:
    Num + NumAssignOps + Copy + PartialOrd + ToPrimitive + FromStr + Sum + Debug + Display + Send + Sync + 'static
{
}

impl<T> Distance for T where
    T: Num + NumAssignOps + Copy + PartialOrd + ToPrimitive + FromStr + Sum + Debug + Display + Send + Sync + 'static
{
}
