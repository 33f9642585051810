//! JSON forms of moduli sets and wall events.
//!
//! Schema: `{branes:[{name, ambient}], truncation, records:[{chi,
//! weight:[num,den], sign, linking:[...], deg, class:[...],
//! boundary:[...]}]}` with one boundary entry per brane: a diagram object
//! (or `PD[...]`/`BR[...]` text on input) for S³ branes, an array of
//! winding indices for solid-torus branes.  Wall events are `{kind, site,
//! direction}`.

use super::{CountError, CurveRecord, ModuliSet, WallEvent, WallKind};
use crate::diagram::{from_dto, parse_diagram, to_dto, CrossingId, DiagramJson};
use crate::skein::{BraneAmbient, BraneList, BraneSpec, TensorFactor};
use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct ModuliJson {
    branes: Vec<BraneJson>,
    #[serde(default)]
    truncation: u32,
    records: Vec<RecordJson>,
}

#[derive(Serialize, Deserialize)]
struct BraneJson {
    name: String,
    ambient: String,
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    chi: i32,
    weight: (i64, i64),
    sign: i8,
    linking: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    deg: Option<i32>,
    class: Vec<u32>,
    boundary: Vec<BoundaryJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BoundaryJson {
    Text(String),
    Windings(Vec<i32>),
    Diagram(DiagramJson),
}

#[derive(Serialize, Deserialize)]
struct WallEventJson {
    kind: String,
    site: SiteJson,
    direction: i8,
}

#[derive(Serialize, Deserialize)]
struct SiteJson {
    record: usize,
    brane: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    crossing: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    component: Option<usize>,
}

pub fn moduli_to_json(m: &ModuliSet) -> Result<String, CountError> {
    let branes = m
        .branes()
        .specs()
        .iter()
        .map(|s| BraneJson {
            name: s.name.clone(),
            ambient: match s.ambient {
                BraneAmbient::S3 => "S3".to_string(),
                BraneAmbient::SolidTorus => "SolidTorus".to_string(),
            },
        })
        .collect();
    let records = m
        .records()
        .iter()
        .enumerate()
        .map(|(i, r)| record_to_json(i, r))
        .collect::<Result<Vec<_>, _>>()?;
    let dto = ModuliJson {
        branes,
        truncation: m.truncation(),
        records,
    };
    Ok(serde_json::to_string_pretty(&dto).expect("moduli serialize"))
}

fn record_to_json(i: usize, r: &CurveRecord) -> Result<RecordJson, CountError> {
    let small = |x: &BigInt| {
        i64::try_from(x).map_err(|_| {
            CountError::Json(format!(
                "record {i}: weight does not fit the [num, den] integer form"
            ))
        })
    };
    Ok(RecordJson {
        chi: r.chi,
        weight: (small(r.weight.numer())?, small(r.weight.denom())?),
        sign: r.sign,
        linking: r.linking.clone(),
        deg: r.deg,
        class: r.class.clone(),
        boundary: r
            .boundary
            .iter()
            .map(|f| match f {
                TensorFactor::Link(d) => BoundaryJson::Diagram(to_dto(d)),
                TensorFactor::Ann(g) => BoundaryJson::Windings(g.clone()),
            })
            .collect(),
    })
}

pub fn moduli_from_json(text: &str) -> Result<ModuliSet, CountError> {
    let dto: ModuliJson =
        serde_json::from_str(text).map_err(|e| CountError::Json(e.to_string()))?;
    let mut specs = Vec::new();
    for b in &dto.branes {
        let ambient = match b.ambient.as_str() {
            "S3" | "s3" => BraneAmbient::S3,
            "SolidTorus" | "solid-torus" => BraneAmbient::SolidTorus,
            other => {
                return Err(CountError::Json(format!(
                    "unknown ambient `{other}` (expected S3 or SolidTorus)"
                )))
            }
        };
        specs.push(BraneSpec {
            name: b.name.clone(),
            ambient,
        });
    }
    let branes = BraneList::new(specs);
    let mut records = Vec::new();
    for (i, r) in dto.records.iter().enumerate() {
        records.push(record_from_json(i, r)?);
    }
    ModuliSet::new(branes, records, dto.truncation)
}

fn record_from_json(i: usize, r: &RecordJson) -> Result<CurveRecord, CountError> {
    let (num, den) = r.weight;
    if den == 0 {
        return Err(CountError::Json(format!(
            "record {i}: weight denominator is zero"
        )));
    }
    let mut boundary = Vec::new();
    for f in &r.boundary {
        boundary.push(match f {
            BoundaryJson::Text(t) => TensorFactor::Link(
                parse_diagram(t).map_err(|e| CountError::Json(format!("record {i}: {e}")))?,
            ),
            BoundaryJson::Windings(g) => TensorFactor::Ann(g.clone()),
            BoundaryJson::Diagram(d) => TensorFactor::Link(
                from_dto(d).map_err(|e| CountError::Json(format!("record {i}: {e}")))?,
            ),
        });
    }
    Ok(CurveRecord {
        chi: r.chi,
        weight: BigRational::new(BigInt::from(num), BigInt::from(den)),
        sign: r.sign,
        linking: r.linking.clone(),
        deg: r.deg,
        class: r.class.clone(),
        boundary,
    })
}

pub fn wall_event_to_json(e: &WallEvent) -> String {
    let dto = WallEventJson {
        kind: match e.kind {
            WallKind::Hyperbolic => "hyperbolic".to_string(),
            WallKind::Elliptic => "elliptic".to_string(),
            WallKind::FramingChange => "framing-change".to_string(),
        },
        site: SiteJson {
            record: e.record,
            brane: e.brane.clone(),
            crossing: e.crossing.map(|c| c.0),
            component: e.component,
        },
        direction: e.direction,
    };
    serde_json::to_string_pretty(&dto).expect("wall event serialize")
}

pub fn wall_event_from_json(text: &str) -> Result<WallEvent, CountError> {
    let dto: WallEventJson =
        serde_json::from_str(text).map_err(|e| CountError::Json(e.to_string()))?;
    let kind = match dto.kind.as_str() {
        "hyperbolic" => WallKind::Hyperbolic,
        "elliptic" => WallKind::Elliptic,
        "framing-change" | "framing" => WallKind::FramingChange,
        other => {
            return Err(CountError::Json(format!(
                "unknown wall-event kind `{other}` \
                 (expected hyperbolic, elliptic, or framing-change)"
            )))
        }
    };
    Ok(WallEvent {
        kind,
        record: dto.site.record,
        brane: dto.site.brane,
        crossing: dto.site.crossing.map(CrossingId),
        component: dto.site.component,
        direction: dto.direction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_braid, Ambient, FramedDiagram};

    fn sample() -> ModuliSet {
        let branes = BraneList::new(vec![BraneSpec::s3("a"), BraneSpec::torus("a1")]);
        let k = parse_braid("BR[2, [1,1,1]]")
            .unwrap()
            .with_correction(0, 1)
            .unwrap();
        let mut r1 = CurveRecord::plain(
            0,
            vec![1],
            vec![TensorFactor::Link(k), TensorFactor::Ann(vec![1])],
        );
        r1.weight = BigRational::new(BigInt::from(3), BigInt::from(-2));
        r1.linking = vec![2, -1];
        let mut r2 = CurveRecord::plain(
            -1,
            vec![2],
            vec![
                TensorFactor::Link(FramedDiagram::empty(Ambient::S3)),
                TensorFactor::Ann(vec![1, -2]),
            ],
        );
        r2.sign = -1;
        r2.deg = Some(4);
        ModuliSet::new(branes, vec![r1, r2], 3).unwrap()
    }

    #[test]
    fn moduli_round_trip() {
        let m = sample();
        let text = moduli_to_json(&m).unwrap();
        let back = moduli_from_json(&text).unwrap();
        assert_eq!(back, m);
        // And the serialized form is stable.
        assert_eq!(moduli_to_json(&back).unwrap(), text);
    }

    #[test]
    fn moduli_accepts_text_diagrams() {
        let text = r#"{
            "branes": [{"name": "a", "ambient": "S3"}],
            "truncation": 2,
            "records": [{
                "chi": 0, "weight": [1, 1], "sign": 1,
                "linking": [0], "class": [1],
                "boundary": ["BR[2, [1,1]]"]
            }]
        }"#;
        let m = moduli_from_json(text).unwrap();
        let expect = parse_braid("BR[2, [1,1]]").unwrap();
        assert_eq!(m.records()[0].boundary[0], TensorFactor::Link(expect));
    }

    #[test]
    fn moduli_schema_errors() {
        assert!(matches!(moduli_from_json("{"), Err(CountError::Json(_))));
        let bad_ambient = r#"{"branes":[{"name":"a","ambient":"torus"}],"records":[]}"#;
        assert!(matches!(
            moduli_from_json(bad_ambient),
            Err(CountError::Json(_))
        ));
        let zero_den = r#"{
            "branes": [{"name": "a", "ambient": "S3"}],
            "records": [{"chi": 0, "weight": [1, 0], "sign": 1,
                         "linking": [0], "class": [], "boundary": ["PD[]"]}]
        }"#;
        assert!(matches!(
            moduli_from_json(zero_den),
            Err(CountError::Json(_))
        ));
        let wrong_linking = r#"{
            "branes": [{"name": "a", "ambient": "S3"}],
            "records": [{"chi": 0, "weight": [1, 1], "sign": 1,
                         "linking": [0, 0], "class": [], "boundary": ["PD[]"]}]
        }"#;
        assert!(matches!(
            moduli_from_json(wrong_linking),
            Err(CountError::Shape { .. })
        ));
    }

    #[test]
    fn wall_event_round_trip() {
        let e = WallEvent {
            kind: WallKind::Hyperbolic,
            record: 1,
            brane: "a".to_string(),
            crossing: Some(CrossingId(2)),
            component: None,
            direction: -1,
        };
        let text = wall_event_to_json(&e);
        assert_eq!(wall_event_from_json(&text).unwrap(), e);
        let f = WallEvent {
            kind: WallKind::FramingChange,
            record: 0,
            brane: "a".to_string(),
            crossing: None,
            component: Some(1),
            direction: 1,
        };
        assert_eq!(wall_event_from_json(&wall_event_to_json(&f)).unwrap(), f);
        assert!(matches!(
            wall_event_from_json(
                r#"{"kind":"melting","site":{"record":0,"brane":"a"},"direction":1}"#
            ),
            Err(CountError::Json(_))
        ));
    }
}
