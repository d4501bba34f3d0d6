use cfworld_core::axioms::{
    check_schema, find_countermodel, schema_instances, Bounds, ClassDescriptor, ClassName, Schema, SearchOutcome,
    Verdict, Witness,
};

fn valid(schema: Schema, cd: &ClassDescriptor) {
    let v = check_schema(schema, cd, &Bounds::default()).unwrap();
    assert!(v.is_valid(), "{schema} over {}: {v:?}", cd.class);
}

#[test]
fn causal_schemas_hold_in_tun() {
    let cd = ClassDescriptor::binary(ClassName::Tun, 2);
    for s in [Schema::C0, Schema::C1, Schema::C2, Schema::C3, Schema::C4, Schema::C5] {
        valid(s, &cd);
    }
}

#[test]
fn generalized_reversibility_holds_in_t() {
    valid(Schema::GenRev, &ClassDescriptor::binary(ClassName::T, 2));
}

#[test]
fn generalized_reversibility_fails_in_structures() {
    let cd = ClassDescriptor::binary(ClassName::MfPlus, 2);
    let inst = schema_instances(Schema::GenRev, &cd, &Bounds::default()).unwrap();
    let found = find_countermodel(&inst, &cd, 20_000, 11).unwrap();
    let SearchOutcome::Found { countermodel, .. } = found else { panic!("no countermodel") };
    let Witness::Structure { structure, world } = &countermodel.witness else { panic!() };
    assert!(!structure.eval_at(world, &countermodel.formula).unwrap());
}

#[test]
fn klm_schemas_hold_in_m() {
    let cd = ClassDescriptor::binary(ClassName::M, 2);
    for s in [Schema::A0, Schema::A1, Schema::A2, Schema::A3, Schema::A4, Schema::A5, Schema::A6] {
        valid(s, &cd);
    }
}

#[test]
fn a7_holds_in_m_plus_only() {
    valid(Schema::A7, &ClassDescriptor::binary(ClassName::MPlus, 2));
    let v = check_schema(Schema::A7, &ClassDescriptor::binary(ClassName::M, 2), &Bounds::default()).unwrap();
    assert!(!v.is_valid());
}

#[test]
fn valuation_schemas() {
    valid(Schema::V1, &ClassDescriptor::binary(ClassName::Ma, 2));
    valid(Schema::V2, &ClassDescriptor::binary(ClassName::Ma, 2));
    valid(Schema::V3, &ClassDescriptor::binary(ClassName::Mf, 2));
}

#[test]
fn causal_schemas_in_structure_classes() {
    valid(Schema::C3, &ClassDescriptor::binary(ClassName::Ma, 2));
    valid(Schema::C4, &ClassDescriptor::binary(ClassName::Ma, 2));
    valid(Schema::C2, &ClassDescriptor::binary(ClassName::MaPlus, 2));
    valid(Schema::C1, &ClassDescriptor::binary(ClassName::Mf, 2));
}

#[test]
fn reversibility_needs_recursion() {
    let v = check_schema(Schema::C5, &ClassDescriptor::binary(ClassName::MfPlus, 2), &Bounds::default()).unwrap();
    assert!(matches!(v, Verdict::Countermodel(_)));
    valid(Schema::C5, &ClassDescriptor::binary(ClassName::Mrec, 2));
}

mod three_variables {
    use super::*;
    use cfworld_core::axioms::{check_validity, instantiate, Substitution};
    use cfworld_core::formula::parse;
    use cfworld_core::Signature;

    const PHI: &str = "[X1<-1](X2=1 & X3=0) & [X2<-1](X3=1 & X1=0) & [X3<-1](X1=1 & X2=0)";

    #[test]
    fn phi_is_satisfiable_in_tun() {
        let cd = ClassDescriptor::binary(ClassName::Tun, 3).with_signature(Signature::binary(3, 1));
        let not_phi = parse(&format!("!({PHI})")).unwrap();
        let v = check_validity(&not_phi, &cd).unwrap();
        let c = v.countermodel().expect("a Tun model satisfies phi");
        let Witness::Causal { model, context } = &c.witness else { panic!() };
        assert!(model.in_tun() && !model.is_recursive());
        assert!(cfworld_core::causal::eval_causal(model, context, &parse(PHI).unwrap()).unwrap());
    }

    #[test]
    fn not_phi_holds_in_every_recursive_model() {
        let cd = ClassDescriptor::binary(ClassName::Trec, 3);
        let not_phi = parse(&format!("!({PHI})")).unwrap();
        let v = check_validity(&not_phi, &cd).unwrap();
        let Verdict::ValidAtBound { checked, .. } = v else { panic!("{v:?}") };
        assert!(checked >= 10_000, "{checked}");
    }

    #[test]
    fn not_phi_survives_random_full_structures() {
        let cd = ClassDescriptor::binary(ClassName::Mf, 3);
        let not_phi = parse(&format!("!({PHI})")).unwrap();
        let out = find_countermodel(&[not_phi], &cd, 100_000, 2024).unwrap();
        assert_eq!(out, SearchOutcome::NotFound { trials: 100_000 });
    }

    #[test]
    fn example_shape_breaks_reversibility() {
        let sub = Substitution::new()
            .bindings("Xs", [("X1", 1)])
            .var("W", "X3")
            .value("w", 1)
            .var("Y", "X2")
            .value("y", 1);
        let c5 = instantiate(Schema::C5, &sub, None).unwrap();
        let cd = ClassDescriptor::binary(ClassName::MfPlus, 3).targeted();
        let v = check_validity(&c5, &cd).unwrap();
        let Witness::Structure { structure, world } = &v.countermodel().unwrap().witness else { panic!() };
        assert!(!structure.classify().recursive);
        assert!(!structure.eval_at(world, &c5).unwrap());
        let rec = ClassDescriptor::binary(ClassName::Mrec, 3).targeted();
        assert!(check_schema(Schema::C5, &rec, &Bounds::default()).unwrap().is_valid());
    }
}

mod disjunctive_antecedents {
    use super::*;
    use cfworld_core::axioms::{check_validity, instantiate, Substitution};
    use cfworld_core::formula::parse;
    use cfworld_core::structure::{CounterfactualStructure, Relation};
    use cfworld_core::Vocabulary;

    fn d4() -> cfworld_core::Formula {
        let sub = Substitution::new()
            .formula("phi1", parse("P=1").unwrap())
            .formula("phi2", parse("Q=1").unwrap())
            .formula("psi", parse("R=1").unwrap());
        instantiate(Schema::D4, &sub, None).unwrap()
    }

    #[test]
    fn holds_with_total_orders() {
        valid(Schema::D4, &ClassDescriptor::binary(ClassName::MPlus, 2));
        assert!(check_validity(&d4(), &ClassDescriptor::binary(ClassName::MPlus, 0)).unwrap().is_valid());
    }

    #[test]
    fn fails_with_branching_orders() {
        let vocab = Vocabulary::new(vec![
            cfworld_core::Variable::new("P", [1]),
            cfworld_core::Variable::new("Q", [1]),
            cfworld_core::Variable::new("R", [1]),
        ])
        .unwrap();
        // (P, Q, R) per world
        let truth = vec![
            vec![false, false, false],
            vec![true, false, true],
            vec![false, true, true],
            vec![true, false, false],
            vec![false, true, false],
        ];
        let mut pairs: Vec<(usize, usize)> = (0..5).map(|v| (0, v)).collect();
        pairs.extend((1..5).map(|v| (v, v)));
        pairs.extend([(2, 3), (1, 4)]);
        let mut orders = vec![Relation::from_pairs(5, pairs)];
        orders.extend((1..5).map(|w| Relation::from_pairs(5, [(w, w)])));
        let ids = (0..5).map(|i| format!("w{i}")).collect();
        let m = CounterfactualStructure::generic(vocab, ids, truth, orders).unwrap();
        assert!(!m.eval_at("w0", &d4()).unwrap());
    }
}
