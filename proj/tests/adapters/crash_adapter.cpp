// Crash-injection fixture: dies without ever answering.
int main() { return 3; }
