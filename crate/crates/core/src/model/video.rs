use super::{CameraPerspective, Code, EntityId, Extras, Field, OperationType, Whistle};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VideoMeta {
    pub match_id: Field<EntityId>,
    pub fps: Field<i64>,
    pub resolution: Field<String>,
    pub operation_type: Field<Code<OperationType>>,
    pub perspective: Field<Code<CameraPerspective>>,
    pub whistles: Field<Vec<Whistle>>,
    pub extras: Extras,
}
