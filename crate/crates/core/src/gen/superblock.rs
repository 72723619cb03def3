use super::GenError;
use crate::model::LabeledInstance;

/// Cycle of `m` superblocks of `len` positions. The letter entering each
/// superblock is `swap`, every other letter is `identity`.
pub fn superblock_instance(
    identity: usize,
    swap: usize,
    len: usize,
    m: usize,
) -> Result<LabeledInstance, GenError> {
    if len == 0 || m < 2 {
        return Err(GenError::Superblock);
    }
    let inputs = (0..len * m)
        .map(|p| if p % len == 0 { swap } else { identity })
        .collect();
    Ok(LabeledInstance::cycle(inputs))
}
