interface Runner {
    void go();
}

class Override2 implements Runner {
}
