//! JSON form of diagrams, with stable field names (`ambient`, `crossings`,
//! `framing`, `winding`).  `framing` holds the per-component correction on
//! top of blackboard framing.

use super::{Ambient, Component, CrossingId, DiagramError, FramedDiagram, Passage, Role};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize)]
pub(crate) struct DiagramJson {
    ambient: String,
    crossings: Vec<CrossingJson>,
    components: Vec<ComponentJson>,
}

#[derive(Serialize, Deserialize)]
struct CrossingJson {
    id: u32,
    sign: i8,
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    passages: Vec<PassageJson>,
    framing: i32,
    winding: i32,
}

#[derive(Serialize, Deserialize)]
struct PassageJson {
    crossing: u32,
    role: String,
}

pub fn to_json(d: &FramedDiagram) -> String {
    serde_json::to_string_pretty(&to_dto(d)).unwrap()
}

pub(crate) fn to_dto(d: &FramedDiagram) -> DiagramJson {
    DiagramJson {
        ambient: match d.ambient() {
            Ambient::S3 => "S3".to_string(),
            Ambient::Annulus => "Annulus".to_string(),
        },
        crossings: d
            .crossing_ids()
            .map(|c| CrossingJson {
                id: c.0,
                sign: d.sign(c).unwrap(),
            })
            .collect(),
        components: d
            .components()
            .iter()
            .map(|c| ComponentJson {
                passages: c
                    .passages
                    .iter()
                    .map(|p| PassageJson {
                        crossing: p.crossing.0,
                        role: match p.role {
                            Role::Over => "over".to_string(),
                            Role::Under => "under".to_string(),
                        },
                    })
                    .collect(),
                framing: c.correction,
                winding: c.winding,
            })
            .collect(),
    }
}

pub fn from_json(text: &str) -> Result<FramedDiagram, DiagramError> {
    let dto: DiagramJson =
        serde_json::from_str(text).map_err(|e| DiagramError::Json(e.to_string()))?;
    from_dto(&dto)
}

pub(crate) fn from_dto(dto: &DiagramJson) -> Result<FramedDiagram, DiagramError> {
    let ambient = match dto.ambient.as_str() {
        "S3" => Ambient::S3,
        "Annulus" => Ambient::Annulus,
        other => return Err(DiagramError::Json(format!("unknown ambient `{other}`"))),
    };
    let mut signs = BTreeMap::new();
    for c in &dto.crossings {
        if signs.insert(CrossingId(c.id), c.sign).is_some() {
            return Err(DiagramError::Json(format!(
                "crossing {} listed twice",
                c.id
            )));
        }
    }
    let mut components = Vec::new();
    for c in &dto.components {
        let mut passages = Vec::new();
        for p in &c.passages {
            let role = match p.role.as_str() {
                "over" => Role::Over,
                "under" => Role::Under,
                other => return Err(DiagramError::Json(format!("unknown role `{other}`"))),
            };
            passages.push(Passage {
                crossing: CrossingId(p.crossing),
                role,
            });
        }
        components.push(Component {
            passages,
            correction: c.framing,
            winding: c.winding,
        });
    }
    FramedDiagram::from_parts(ambient, signs, components)
}

#[cfg(test)]
mod tests {
    use super::super::parse_braid;
    use super::*;

    #[test]
    fn json_round_trip() {
        let d = parse_braid("BR[3, [1,-2,1,-2]]")
            .unwrap()
            .with_correction(0, 2)
            .unwrap();
        let back = from_json(&to_json(&d)).unwrap();
        assert_eq!(back, d);
        let a = FramedDiagram::annulus_loop(-3);
        assert_eq!(from_json(&to_json(&a)).unwrap(), a);
    }

    #[test]
    fn json_validation_errors() {
        assert!(from_json("{").is_err());
        // A passage through an undeclared crossing is rejected.
        let bad = r#"{"ambient":"S3","crossings":[],
            "components":[{"passages":[{"crossing":0,"role":"over"}],
            "framing":0,"winding":0}]}"#;
        assert!(matches!(from_json(bad), Err(DiagramError::Invalid(_))));
        // Nonzero winding is annulus-only data.
        let bad2 = r#"{"ambient":"S3","crossings":[],
            "components":[{"passages":[],"framing":0,"winding":2}]}"#;
        assert!(matches!(from_json(bad2), Err(DiagramError::Invalid(_))));
    }
}
