public class PeriodDemo {
  public PeriodFormatter formatter() {
    PeriodFormatterBuilder builder = new PeriodFormatterBuilder();
    builder.appendHours().appendSuffix("h");
    return builder.toFormatter();
  }

  public String show(Period period) {
    return formatter().print(period);
  }
}
