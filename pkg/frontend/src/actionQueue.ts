// Sequential per-session action queue: user actions are sent one at a time,
// each starting only after the previous settled, so server-side mode checks
// always see the state our latest ack reflected.

export class ActionQueue {
  private tail: Promise<unknown> = Promise.resolve();
  private depth = 0;

  run<T>(task: () => Promise<T>): Promise<T> {
    this.depth++;
    const result = this.tail.then(task, task);
    this.tail = result.then(
      () => {
        this.depth--;
      },
      () => {
        this.depth--;
      },
    );
    return result;
  }

  get pending(): number {
    return this.depth;
  }

  // Settles once everything queued so far has finished.
  async idle(): Promise<void> {
    while (this.depth > 0) {
      await this.tail;
    }
  }
}
