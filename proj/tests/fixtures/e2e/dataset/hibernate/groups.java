public class GroupsDemo {
  UserGroup group = new UserGroup();
}
