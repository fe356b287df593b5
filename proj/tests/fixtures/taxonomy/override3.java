class Override3 {
    @Override
    void notInAnySupertype() {
    }
}
