import com.nope.Thing;

class Symbol2 {
    Thing t;
}
