abstract class Base1 {
    abstract void run();
}

class Override1 extends Base1 {
}
