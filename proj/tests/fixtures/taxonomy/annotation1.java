@Override
class Annotation1 {
}
