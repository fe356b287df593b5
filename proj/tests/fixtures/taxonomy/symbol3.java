class Symbol3 {
    int x = undefinedVariable;
}
