print(os.path.join("a", "b"))
