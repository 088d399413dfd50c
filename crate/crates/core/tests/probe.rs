use subsetcomb_core::corpus::*;

#[test]
fn probe_items() {
    let items = generate_corpus(1, 12);
    for i in [1usize, 3, 4, 8, 10] {
        let item = &items[i];
        println!("item {}: label={} group={:?}", i, item.label, item.group.label());
        println!("  expr = {}", serde_json::to_string(&item.expr).unwrap());
        let rep = check_item(item, 1 << 22).unwrap();
        println!("  sparse={:?} small={:?} scattered={:?}", rep.sparse.polarity, rep.small.polarity, rep.scattered.polarity);
        println!("  sparse note: {}", rep.sparse.note);
        println!("  small note: {}", rep.small.note);
        println!("  scattered note: {}", rep.scattered.note);
    }
    panic!("done");
}
